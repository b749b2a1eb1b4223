#include "aparareal/parareal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "aparareal/parallel.hpp"

namespace aparareal {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Relative sup-norm change; a vanishing state only counts if it moved.
double relative_change(const SpectralState& current, const SpectralState& previous,
                       const GridSpec& grid) {
  const PhysicalState now = to_physical(current, grid);
  const PhysicalState before = to_physical(previous, grid);
  if (linf_norm(now) == 0.0) {
    return linf_norm(before) == 0.0 ? 0.0
                                    : std::numeric_limits<double>::infinity();
  }
  return max_rel_linf_error(before, now);
}

}  // namespace

void PararealConfig::validate() const {
  if (num_slices == 0) throw ConfigError("parareal needs at least one slice");
  if (!(delta_T > 0.0) || !(delta_t > 0.0)) {
    throw ConfigError("parareal steps must be positive");
  }
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_iter > num_slices) {
    throw ConfigError("max_iter (" + std::to_string(max_iter) +
                      ") exceeds the number of slices (" +
                      std::to_string(num_slices) + ")");
  }
  coarse.validate();
  fine.validate();
  if (coarse.delta_T != delta_T) {
    throw ConfigError("coarse solver step differs from the slice length");
  }
  if (fine.delta_t != delta_t ||
      std::abs(fine.slice_length() - delta_T) > 1e-12 * std::max(1.0, delta_T)) {
    throw ConfigError("fine solver does not tile the slice: M dt != dT");
  }
  if (workers == 0) throw ConfigError("workers must be at least 1");
}

PararealSolver::PararealSolver(PararealConfig config, const WaveBasis& basis)
    : config_(std::move(config)), basis_(&basis) {
  auto coarse = std::make_shared<CoarseStepper>(basis, config_.coarse);
  auto fine = std::make_shared<StrangStepper>(basis, config_.fine.delta_t);
  const std::size_t steps = config_.fine.steps_per_slice;
  coarse_ = [coarse](const SpectralState& u) { return coarse->step(u); };
  fine_ = [fine, steps](const SpectralState& u) { return fine->run(u, steps); };
}

PararealSolver::PararealSolver(PararealConfig config, const WaveBasis& basis,
                               SliceMap coarse, SliceMap fine)
    : config_(std::move(config)),
      basis_(&basis),
      coarse_(std::move(coarse)),
      fine_(std::move(fine)) {}

Trajectory PararealSolver::initial_sweep(const SpectralState& u0) const {
  basis_->check_compatible(u0);
  Trajectory traj;
  traj.snapshots.reserve(config_.num_slices + 1);
  traj.snapshots.push_back(u0);
  for (std::size_t n = 1; n <= config_.num_slices; ++n) {
    traj.snapshots.push_back(coarse_(traj.snapshots.back()));
  }
  return traj;
}

std::pair<Trajectory, IterationRecord> PararealSolver::iterate(
    const Trajectory& previous, std::size_t iteration) const {
  const std::size_t num_slices = previous.num_slices();
  const auto& old = previous.snapshots;
  IterationRecord record;
  record.iteration = iteration;

  // Fine-minus-coarse corrections from the previous iterate, one per slice.
  std::vector<SpectralState> corrections(num_slices);
  std::vector<double> slice_seconds(num_slices, 0.0);
  parallel_for(num_slices, config_.workers, [&](std::size_t n) {
    const auto start = Clock::now();
    SpectralState v = fine_(old[n]);
    v -= coarse_(old[n]);
    corrections[n] = std::move(v);
    slice_seconds[n] = seconds_since(start);
  });
  if (!slice_seconds.empty()) {
    record.correction_seconds =
        *std::max_element(slice_seconds.begin(), slice_seconds.end());
  }

  const auto sweep_start = Clock::now();
  Trajectory next;
  next.snapshots.reserve(num_slices + 1);
  next.snapshots.push_back(old.front());
  for (std::size_t n = 1; n <= num_slices; ++n) {
    SpectralState u = coarse_(next.snapshots.back());
    u += corrections[n - 1];
    next.snapshots.push_back(std::move(u));
  }
  record.coarse_seconds = seconds_since(sweep_start);

  double residual = 0.0;
  for (std::size_t n = 1; n <= num_slices; ++n) {
    residual = std::max(residual, relative_change(next.snapshots[n], old[n],
                                                  basis_->grid()));
  }
  record.residual = residual;
  return {std::move(next), record};
}

PararealRun PararealSolver::run(const SpectralState& u0,
                                const Trajectory* reference) const {
  config_.validate();
  if (reference && reference->num_slices() != config_.num_slices) {
    throw ConfigError("reference has " + std::to_string(reference->num_slices()) +
                      " slices, parareal uses " +
                      std::to_string(config_.num_slices));
  }
  const GridSpec& grid = basis_->grid();

  PararealRun result;
  const auto sweep_start = Clock::now();
  result.trajectory = initial_sweep(u0);

  // The k = 0 residual measures the coarse sweep against the constant guess
  // U_n = u0, so an unreachable tolerance returns straight after the sweep.
  IterationRecord first;
  first.coarse_seconds = seconds_since(sweep_start);
  double initial_change = 0.0;
  for (std::size_t n = 1; n <= config_.num_slices; ++n) {
    initial_change = std::max(
        initial_change, relative_change(result.trajectory.snapshots[n], u0, grid));
  }
  first.residual = initial_change;
  if (reference) {
    first.max_rel_linf_error =
        max_rel_linf_error(result.trajectory, *reference, grid);
  }
  result.records.push_back(first);
  if (initial_change <= config_.tol) {
    result.converged = true;
    return result;
  }

  for (std::size_t k = 1; k <= config_.max_iter; ++k) {
    auto [next, record] = iterate(result.trajectory, k);
    const double residual = *record.residual;
    if (!std::isfinite(residual) || residual > kDivergenceThreshold) {
      std::ostringstream msg;
      msg << "parareal diverged at iteration " << k << ": residual "
          << residual << " exceeds " << kDivergenceThreshold;
      throw DivergenceError(msg.str());
    }
    if (reference) {
      record.max_rel_linf_error = max_rel_linf_error(next, *reference, grid);
    }
    result.trajectory = std::move(next);
    result.records.push_back(record);
    if (residual <= config_.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

// --------------------------------------------------------------- free API

Trajectory initial_sweep(const SpectralState& u0, const PararealConfig& cfg,
                         const WaveBasis& basis) {
  return PararealSolver(cfg, basis).initial_sweep(u0);
}

std::pair<Trajectory, IterationRecord> parareal_iterate(
    const Trajectory& traj, const PararealConfig& cfg, const WaveBasis& basis) {
  return PararealSolver(cfg, basis).iterate(traj, 1);
}

PararealRun run(const SpectralState& u0, const PararealConfig& cfg,
                const WaveBasis& basis, const std::optional<Trajectory>& reference) {
  return PararealSolver(cfg, basis).run(u0, reference ? &*reference : nullptr);
}

Trajectory serial_fine_trajectory(const SpectralState& u0, std::size_t num_slices,
                                  const FineConfig& fine, const WaveBasis& basis) {
  fine.validate();
  basis.check_compatible(u0);
  const StrangStepper stepper(basis, fine.delta_t);
  Trajectory traj;
  traj.snapshots.reserve(num_slices + 1);
  traj.snapshots.push_back(u0);
  for (std::size_t n = 1; n <= num_slices; ++n) {
    traj.snapshots.push_back(
        stepper.run(traj.snapshots.back(), fine.steps_per_slice));
  }
  return traj;
}

double max_rel_linf_error(const Trajectory& traj, const Trajectory& reference,
                          const GridSpec& grid) {
  if (traj.snapshots.size() != reference.snapshots.size()) {
    throw ConfigError("trajectories have different lengths");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < traj.snapshots.size(); ++n) {
    worst = std::max(worst, max_rel_linf_error(to_physical(traj.snapshots[n], grid),
                                               to_physical(reference.snapshots[n], grid)));
  }
  return worst;
}

}  // namespace aparareal
