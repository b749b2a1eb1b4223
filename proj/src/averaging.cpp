#include "aparareal/averaging.hpp"

#include <cmath>
#include <string>

#include "aparareal/parallel.hpp"

namespace aparareal {

namespace {

constexpr Complex kI{0.0, 1.0};

// Phase factors exp(i omega_alpha tau) for one mode.
Eigen::Vector3cd phases(const ModeBasis& mode, double tau) {
  const Complex plus = std::exp(kI * mode.omegas[2] * tau);
  return {std::conj(plus), 1.0, plus};
}

}  // namespace

double bump_kernel(double s) {
  if (!(s > 0.0 && s < 1.0)) return 0.0;
  return kBumpNormalization * std::exp(-1.0 / (s * (1.0 - s)));
}

AveragingKernel make_kernel(std::size_t num_nodes, double window) {
  if (num_nodes < 2) {
    throw ConfigError("averaging kernel needs at least 2 nodes, got " +
                      std::to_string(num_nodes));
  }
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw ConfigError("averaging window must be positive and finite");
  }
  AveragingKernel kernel;
  kernel.num_nodes = num_nodes;
  kernel.window = window;
  kernel.nodes.resize(num_nodes);
  kernel.weights.resize(num_nodes);
  const double mbar = static_cast<double>(num_nodes);
  double total = 0.0;
  for (std::size_t m = 0; m < num_nodes; ++m) {
    const double fraction = static_cast<double>(m) / mbar;
    kernel.nodes[m] = window * fraction;
    kernel.weights[m] = bump_kernel(fraction);
    total += kernel.weights[m];
  }
  for (auto& w : kernel.weights) w /= total;

  // Make the left-to-right sum exactly one: the residue goes into the
  // central weight, then the last nonzero weight is set to 1 - (sum of the
  // others), which is exact once that partial sum lies in [1/2, 1]. The
  // central weight is nudged by a few ulps if the partial sum overshoots.
  std::size_t last = num_nodes - 1;
  while (kernel.weights[last] == 0.0) --last;
  const std::size_t centre = num_nodes / 2;
  const auto sum_before = [&](std::size_t end) {
    double sum = 0.0;
    for (std::size_t m = 0; m < end; ++m) sum += kernel.weights[m];
    return sum;
  };
  if (last != centre) {
    const double base =
        kernel.weights[centre] + (1.0 - sum_before(num_nodes));
    for (int j = 0; j < 64; ++j) {
      kernel.weights[centre] = base - j * 0x1p-53;
      const double partial = sum_before(last);
      if (partial <= 1.0) {
        kernel.weights[last] = 1.0 - partial;
        if (sum_before(num_nodes) == 1.0) break;
      }
    }
  }
  return kernel;
}

SpectralState averaged_nonlinear(const SpectralState& s,
                                 const AveragingKernel& kernel,
                                 const WaveBasis& basis, std::size_t workers) {
  basis.check_compatible(s);
  const std::size_t num_modes = basis.size();

  // Wave amplitudes of the frozen slow state.
  std::vector<Eigen::Vector3cd> amplitudes(num_modes);
  for (std::size_t j = 0; j < num_modes; ++j) {
    amplitudes[j] = basis.mode(j).eigvecs_inv * s.mode(j);
  }

  // Each node contributes exp(i omega s_m) R^dagger N(exp(-s_m L) u), kept in
  // wave coordinates until the final reduction.
  std::vector<SpectralState> contributions(kernel.num_nodes);
  parallel_for(kernel.num_nodes, workers, [&](std::size_t m) {
    if (kernel.weights[m] == 0.0) return;
    const double tau = kernel.nodes[m];
    SpectralState rotated(num_modes);
    for (std::size_t j = 0; j < num_modes; ++j) {
      const auto& mode = basis.mode(j);
      const Eigen::Vector3cd back = phases(mode, -tau).cwiseProduct(amplitudes[j]);
      rotated.set_mode(j, mode.eigvecs * back);
    }
    SpectralState n = nonlinear_term(rotated, basis.grid());
    for (std::size_t j = 0; j < num_modes; ++j) {
      const auto& mode = basis.mode(j);
      n.set_mode(j, phases(mode, tau).cwiseProduct(mode.eigvecs_inv * n.mode(j)));
    }
    contributions[m] = std::move(n);
  });

  SpectralState sum(num_modes);
  for (std::size_t m = 0; m < kernel.num_nodes; ++m) {
    if (kernel.weights[m] == 0.0) continue;
    sum.add_scaled(kernel.weights[m], contributions[m]);
  }
  for (std::size_t j = 0; j < num_modes; ++j) {
    sum.set_mode(j, basis.mode(j).eigvecs * sum.mode(j));
  }
  apply_dealias(sum, basis.grid());
  return sum;
}

Complex oscillation_suppression(double lambda, const AveragingKernel& kernel) {
  Complex total = 0.0;
  for (std::size_t m = 0; m < kernel.num_nodes; ++m) {
    total += kernel.weights[m] * std::exp(kI * lambda * kernel.nodes[m]);
  }
  return total;
}

}  // namespace aparareal
