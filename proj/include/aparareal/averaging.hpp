#pragma once

// Kernel-weighted finite-time average of the conjugated nonlinearity
//
//   Nbar(u) = (1/T0) int_0^T0 rho(s/T0) exp(sL) N(exp(-sL) u) ds
//
// discretized on the nodes s_m = T0 m / Mbar, m = 0..Mbar-1. The window T0 is
// measured in the eps-free fast variable s; a physical averaging window of
// length tau corresponds to T0 = tau / eps.

#include <cstddef>
#include <vector>

#include "aparareal/spectral_core.hpp"
#include "aparareal/wave_basis.hpp"

namespace aparareal {

/// 1 / int_0^1 exp(-1/(s(1-s))) ds, so the bump kernel has unit L1 norm.
inline constexpr double kBumpNormalization = 142.25037577709587;

/// C exp(-1/(s(1-s))) on (0, 1), zero elsewhere.
double bump_kernel(double s);

struct AveragingKernel {
  std::size_t num_nodes = 0;
  double window = 0.0;
  std::vector<double> nodes;
  /// Normalized to sum to one; weights[0] is always zero.
  std::vector<double> weights;
};

/// Nodes T0 m / Mbar with weights rho(m / Mbar) rescaled to unit sum.
/// Throws ConfigError for Mbar < 2 (every weight would vanish) or T0 <= 0.
AveragingKernel make_kernel(std::size_t num_nodes, double window);

/// Fast-variable window whose physical length eps*T0 equals the coarse step,
/// the choice for problems without scale separation.
inline double window_matching_coarse_step(double delta_T, double epsilon) {
  return delta_T / epsilon;
}

/// sum_m w_m exp(s_m L) N(exp(-s_m L) u). The node evaluations run on up to
/// `workers` threads; the weighted sum is always taken in node order, so the
/// result does not depend on the worker count.
SpectralState averaged_nonlinear(const SpectralState& s,
                                 const AveragingKernel& kernel,
                                 const WaveBasis& basis,
                                 std::size_t workers = 1);

/// sum_m w_m exp(i lambda s_m): the discrete response of the average to a
/// single oscillation of frequency lambda.
Complex oscillation_suppression(double lambda, const AveragingKernel& kernel);

}  // namespace aparareal
