#pragma once

// Parareal with an asymptotic coarse propagator G and a Strang fine
// propagator F over N slices of length dT:
//
//   U_n^0 = G(U_{n-1}^0)
//   U_n^k = G(U_{n-1}^k) + F(U_{n-1}^{k-1}) - G(U_{n-1}^{k-1})
//
// The corrections F - G are an independent map over slices; the update sweep
// is serial. After k iterations U_0..U_k coincide with the serial fine
// trajectory.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "aparareal/integrators.hpp"
#include "aparareal/spectral_core.hpp"
#include "aparareal/wave_basis.hpp"

namespace aparareal {

struct PararealConfig {
  std::size_t num_slices = 0;
  double delta_T = 0.0;
  double delta_t = 0.0;
  double tol = 1e-10;
  std::size_t max_iter = 5;
  CoarseConfig coarse;
  FineConfig fine;
  /// Threads for the slice-parallel correction phase.
  std::size_t workers = 1;

  /// Checks every cross-field invariant (dT = M dt, coarse/fine agree on dT,
  /// max_iter <= N); throws ConfigError.
  void validate() const;
};

/// Snapshots U_0..U_N at times n dT.
struct Trajectory {
  std::vector<SpectralState> snapshots;

  std::size_t num_slices() const {
    return snapshots.empty() ? 0 : snapshots.size() - 1;
  }
};

struct IterationRecord {
  std::size_t iteration = 0;
  std::optional<double> max_rel_linf_error;
  /// max_n ||U_n^k - U_n^{k-1}||_inf / ||U_n^k||_inf; empty for k = 0.
  std::optional<double> residual;
  double coarse_seconds = 0.0;
  /// Slowest single slice of the correction phase.
  double correction_seconds = 0.0;
};

struct PararealRun {
  std::vector<IterationRecord> records;
  Trajectory trajectory;
  bool converged = false;

  std::size_t iterations() const {
    return records.empty() ? 0 : records.size() - 1;
  }
};

/// Maps a slice-start state to the slice-end state.
using SliceMap = std::function<SpectralState(const SpectralState&)>;

/// Residuals above this abort the run with DivergenceError.
inline constexpr double kDivergenceThreshold = 1e6;

class PararealSolver {
 public:
  /// Default propagators: CoarseStepper for G and Strang steps for F.
  PararealSolver(PararealConfig config, const WaveBasis& basis);
  /// Custom propagators, e.g. to test the iteration with G = F.
  PararealSolver(PararealConfig config, const WaveBasis& basis, SliceMap coarse,
                 SliceMap fine);

  Trajectory initial_sweep(const SpectralState& u0) const;

  /// One parareal iteration. The record's error field is left empty.
  std::pair<Trajectory, IterationRecord> iterate(const Trajectory& previous,
                                                 std::size_t iteration) const;

  /// Initial sweep, then iterate until the residual drops to tol or
  /// max_iter iterations have run. `reference`, when given, must hold N + 1
  /// snapshots and is used to fill max_rel_linf_error.
  PararealRun run(const SpectralState& u0,
                  const Trajectory* reference = nullptr) const;

  const PararealConfig& config() const noexcept { return config_; }

 private:
  PararealConfig config_;
  const WaveBasis* basis_;
  SliceMap coarse_;
  SliceMap fine_;
};

Trajectory initial_sweep(const SpectralState& u0, const PararealConfig& cfg,
                         const WaveBasis& basis);

std::pair<Trajectory, IterationRecord> parareal_iterate(
    const Trajectory& traj, const PararealConfig& cfg, const WaveBasis& basis);

PararealRun run(const SpectralState& u0, const PararealConfig& cfg,
                const WaveBasis& basis,
                const std::optional<Trajectory>& reference = std::nullopt);

/// Serial fine trajectory with snapshots every fine.slice_length().
Trajectory serial_fine_trajectory(const SpectralState& u0, std::size_t num_slices,
                                  const FineConfig& fine, const WaveBasis& basis);

/// max over snapshots of the relative sup-norm distance to `reference`.
double max_rel_linf_error(const Trajectory& traj, const Trajectory& reference,
                          const GridSpec& grid);

}  // namespace aparareal
