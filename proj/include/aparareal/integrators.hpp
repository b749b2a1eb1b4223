#pragma once

// Time steppers for du/dt = -(1/eps) L u + N(u) + D u:
//
//   * CoarseStepper  - one step of the averaged slow equation in the frame
//                      rotating with the fast flow, then mapped back.
//   * StrangStepper  - exact linear half steps around an explicit midpoint
//                      step of N (the parareal fine solver).
//   * Etdrk4Stepper  - Cox-Matthews exponential Runge-Kutta, order 4.
//   * IntegratingFactorStepper - classical RK4 on exp(tA) u, A = -L/eps + D.
//
// Every stepper takes the nonlinearity as a callable so tests can switch it
// off or substitute it; the default is nonlinear_term on the basis' grid.

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "aparareal/averaging.hpp"
#include "aparareal/spectral_core.hpp"
#include "aparareal/wave_basis.hpp"

namespace aparareal {

using NonlinearFn = std::function<SpectralState(const SpectralState&)>;

/// nonlinear_term bound to the basis' grid.
NonlinearFn default_nonlinearity(const WaveBasis& basis);

struct CoarseConfig {
  double delta_T = 0.0;
  AveragingKernel kernel;
  /// Threads used for the node map inside each averaged evaluation.
  std::size_t workers = 1;

  void validate() const;
};

struct FineConfig {
  double delta_t = 0.0;
  std::size_t steps_per_slice = 0;

  /// Derives M = delta_T / delta_t; throws ConfigError unless M is a
  /// positive integer to within 1e-12 (relative to delta_T).
  static FineConfig for_slice(double delta_T, double delta_t);

  double slice_length() const {
    return delta_t * static_cast<double>(steps_per_slice);
  }
  void validate() const;
};

class CoarseStepper {
 public:
  CoarseStepper(const WaveBasis& basis, CoarseConfig config);

  SpectralState step(const SpectralState& u0) const;

  const CoarseConfig& config() const noexcept { return config_; }

 private:
  const WaveBasis* basis_;
  CoarseConfig config_;
  LinearPropagator half_dissipation_;
  LinearPropagator fast_map_back_;
};

class StrangStepper {
 public:
  StrangStepper(const WaveBasis& basis, double dt, NonlinearFn nonlinear = {});

  SpectralState step(const SpectralState& u) const;
  SpectralState run(const SpectralState& u, std::size_t steps) const;

  double dt() const noexcept { return dt_; }

 private:
  double dt_;
  NonlinearFn nonlinear_;
  LinearPropagator half_step_;
};

class Etdrk4Stepper {
 public:
  Etdrk4Stepper(const WaveBasis& basis, double dt, NonlinearFn nonlinear = {});

  SpectralState step(const SpectralState& u) const;
  SpectralState run(const SpectralState& u, std::size_t steps) const;

 private:
  // Per-mode matrix functions of A = -L/eps + D; see step() for their roles.
  struct ModeCoefficients {
    Eigen::Matrix3cd full;       // exp(hA)
    Eigen::Matrix3cd half;       // exp(hA/2)
    Eigen::Matrix3cd half_phi1;  // (h/2) phi1(hA/2)
    Eigen::Matrix3cd f1;         // h (phi1 - 3 phi2 + 4 phi3)(hA)
    Eigen::Matrix3cd f2;         // h (phi2 - 2 phi3)(hA)
    Eigen::Matrix3cd f3;         // h (-phi2 + 4 phi3)(hA)
  };

  double dt_;
  NonlinearFn nonlinear_;
  std::vector<ModeCoefficients> coeffs_;
};

class IntegratingFactorStepper {
 public:
  IntegratingFactorStepper(const WaveBasis& basis, double dt,
                           NonlinearFn nonlinear = {});

  SpectralState step(const SpectralState& u) const;
  SpectralState run(const SpectralState& u, std::size_t steps) const;

 private:
  double dt_;
  NonlinearFn nonlinear_;
  LinearPropagator half_;
  LinearPropagator full_;
};

/// phi_j(z) = sum_{n>=0} z^n / (n + j)!, evaluated without cancellation.
Complex phi_function(int j, Complex z);

SpectralState coarse_step(const SpectralState& u0, const CoarseConfig& cfg,
                          const WaveBasis& basis);
SpectralState fine_step(const SpectralState& u, double dt,
                        const WaveBasis& basis);
SpectralState fine_run(const SpectralState& u0, const FineConfig& cfg,
                       const WaveBasis& basis);
SpectralState etdrk4_step(const SpectralState& u, double dt,
                          const WaveBasis& basis);
SpectralState integrating_factor_step(const SpectralState& u, double dt,
                                      const WaveBasis& basis);

}  // namespace aparareal
