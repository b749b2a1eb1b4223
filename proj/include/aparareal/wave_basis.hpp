#pragma once

// Closed-form eigenstructure of the fast operator symbol and the exact
// exponential propagators built on it.
//
// Per wavenumber, L(k) = R diag(i*omega) R^dagger with omega in
// (-w_k, 0, +w_k), w_k = sqrt(1 + k^2 / F), and R unitary. Two families of
// flows are exposed:
//
//   * fast_phase(tau)      : exp(tau L), eps-free. Used for the conjugation
//                            exp(sL) N(exp(-sL) u) inside the time average.
//   * LinearPropagator(t)  : the linear part of the evolution equation over
//                            physical time t, exp(t(-L/eps + D)), with either
//                            factor switchable off. L and D commute, so the
//                            split is exact.

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "aparareal/spectral_core.hpp"

namespace aparareal {

struct ModeBasis {
  int k = 0;
  /// Physical wavenumber that enters the symbols.
  double wavenumber = 0.0;
  /// Ordered (-w_k, 0, +w_k).
  std::array<double, 3> omegas{};
  /// Unit-norm eigenvectors as columns; largest-magnitude entry of each
  /// column is real and positive.
  Eigen::Matrix3cd eigvecs;
  Eigen::Matrix3cd eigvecs_inv;
};

/// Cache of the per-mode eigenstructure for every stored wavenumber.
class WaveBasis {
 public:
  WaveBasis(const GridSpec& grid, const Params& params);

  const GridSpec& grid() const noexcept { return grid_; }
  const Params& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const ModeBasis& mode(std::size_t index) const { return modes_[index]; }
  double dissipation_rate(std::size_t index) const {
    return symbol_D(modes_[index].wavenumber, params_.mu);
  }

  /// Throws ConfigError if s was not laid out on this basis' grid.
  void check_compatible(const SpectralState& s) const;

 private:
  GridSpec grid_;
  Params params_;
  std::vector<ModeBasis> modes_;
};

WaveBasis build_basis(const GridSpec& g, const Params& p);

/// Eigen-decomposition of the symbol at physical wavenumber k. The Nyquist
/// mode of a grid is built with k = 0 for the odd-derivative entries.
ModeBasis mode_basis(int k, double wavenumber, double froude);

/// Which factors of exp(t(-L/eps + D)) a propagator applies.
struct FlowParts {
  bool fast = true;
  bool dissipation = true;
};

/// Per-mode 3x3 multipliers, precomputed once for repeated application.
class LinearPropagator {
 public:
  LinearPropagator() = default;
  /// exp(t(-L/eps + D)) restricted to `parts`.
  LinearPropagator(const WaveBasis& basis, double t, FlowParts parts);

  /// exp(tau L) with no 1/eps scaling.
  static LinearPropagator fast_phase(const WaveBasis& basis, double tau);

  void apply(SpectralState& s) const;
  SpectralState operator()(const SpectralState& s) const {
    SpectralState out = s;
    apply(out);
    return out;
  }

  const Eigen::Matrix3cd& matrix(std::size_t index) const {
    return per_mode_[index];
  }

 private:
  std::vector<Eigen::Matrix3cd> per_mode_;
};

/// One-shot linear flow over physical time t.
SpectralState propagate(const SpectralState& s, double t, const WaveBasis& basis,
                        bool include_L, bool include_D);

/// One-shot exp(tau L).
SpectralState fast_phase(const SpectralState& s, double tau,
                         const WaveBasis& basis);

/// R diag(factors) R^dagger for one mode; factors follow the omega ordering.
Eigen::Matrix3cd spectral_function(const ModeBasis& mode,
                                   const std::array<Complex, 3>& factors);

}  // namespace aparareal
