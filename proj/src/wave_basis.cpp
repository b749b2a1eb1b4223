#include "aparareal/wave_basis.hpp"

#include <cmath>
#include <string>

namespace aparareal {

namespace {

constexpr Complex kI{0.0, 1.0};

// Rotates a unit column so its largest-magnitude entry is real and positive.
// Ties resolve to the lowest index.
void fix_phase(Eigen::Ref<Eigen::Vector3cd> v) {
  std::size_t pivot = 0;
  double largest = std::abs(v(0));
  for (std::size_t i = 1; i < 3; ++i) {
    const double m = std::abs(v(i));
    if (m > largest * (1.0 + 1e-12)) {
      largest = m;
      pivot = i;
    }
  }
  v *= std::conj(v(pivot)) / largest;
  v(pivot) = largest;
}

}  // namespace

ModeBasis mode_basis(int k, double wavenumber, double froude) {
  ModeBasis mb;
  mb.k = k;
  mb.wavenumber = wavenumber;
  const double c = wavenumber / std::sqrt(froude);
  const double w = std::sqrt(1.0 + c * c);
  mb.omegas = {-w, 0.0, w};

  // L r = i omega r: for omega != 0, r = (1, -i/omega, c/omega) / sqrt(2);
  // for omega = 0, r = (0, i c, 1) / sqrt(1 + c^2).
  for (std::size_t a = 0; a < 3; ++a) {
    const double omega = mb.omegas[a];
    Eigen::Vector3cd r;
    if (a == 1) {
      r << 0.0, kI * c, 1.0;
      r /= std::sqrt(1.0 + c * c);
    } else {
      r << 1.0, -kI / omega, c / omega;
      r /= std::sqrt(2.0);
    }
    fix_phase(r);
    mb.eigvecs.col(static_cast<Eigen::Index>(a)) = r;
  }
  mb.eigvecs_inv = mb.eigvecs.adjoint();
  return mb;
}

WaveBasis::WaveBasis(const GridSpec& grid, const Params& params)
    : grid_(grid), params_(params) {
  grid_.validate();
  params_.validate();
  modes_.reserve(grid_.num_modes);
  const int nyquist = static_cast<int>(grid_.num_modes / 2);
  for (std::size_t j = 0; j < grid_.num_modes; ++j) {
    const int k = grid_.wavenumber(j);
    const double kappa = k == nyquist ? 0.0 : grid_.physical_wavenumber(j);
    modes_.push_back(mode_basis(k, kappa, params_.froude));
  }
}

void WaveBasis::check_compatible(const SpectralState& s) const {
  if (s.num_modes() != grid_.num_modes) {
    throw ConfigError("state with " + std::to_string(s.num_modes()) +
                      " modes used with a basis built for " +
                      std::to_string(grid_.num_modes));
  }
}

WaveBasis build_basis(const GridSpec& g, const Params& p) { return {g, p}; }

Eigen::Matrix3cd spectral_function(const ModeBasis& mode,
                                   const std::array<Complex, 3>& factors) {
  const Eigen::Vector3cd diag(factors[0], factors[1], factors[2]);
  return mode.eigvecs * diag.asDiagonal() * mode.eigvecs_inv;
}

LinearPropagator::LinearPropagator(const WaveBasis& basis, double t,
                                   FlowParts parts) {
  const double eps = basis.params().epsilon;
  per_mode_.reserve(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& mode = basis.mode(j);
    const double decay =
        parts.dissipation ? std::exp(basis.dissipation_rate(j) * t) : 1.0;
    if (!parts.fast) {
      per_mode_.push_back(decay * Eigen::Matrix3cd::Identity());
      continue;
    }
    std::array<Complex, 3> f;
    for (std::size_t a = 0; a < 3; ++a) {
      f[a] = decay * std::exp(-kI * mode.omegas[a] * t / eps);
    }
    per_mode_.push_back(spectral_function(mode, f));
  }
}

LinearPropagator LinearPropagator::fast_phase(const WaveBasis& basis,
                                              double tau) {
  LinearPropagator p;
  p.per_mode_.reserve(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& mode = basis.mode(j);
    std::array<Complex, 3> f;
    for (std::size_t a = 0; a < 3; ++a) f[a] = std::exp(kI * mode.omegas[a] * tau);
    p.per_mode_.push_back(spectral_function(mode, f));
  }
  return p;
}

void LinearPropagator::apply(SpectralState& s) const {
  if (s.num_modes() != per_mode_.size()) {
    throw ConfigError("propagator built for " + std::to_string(per_mode_.size()) +
                      " modes applied to a state with " +
                      std::to_string(s.num_modes()));
  }
  for (std::size_t j = 0; j < per_mode_.size(); ++j) {
    s.set_mode(j, per_mode_[j] * s.mode(j));
  }
}

SpectralState propagate(const SpectralState& s, double t, const WaveBasis& basis,
                        bool include_L, bool include_D) {
  basis.check_compatible(s);
  return LinearPropagator(basis, t, {include_L, include_D})(s);
}

SpectralState fast_phase(const SpectralState& s, double tau,
                         const WaveBasis& basis) {
  basis.check_compatible(s);
  return LinearPropagator::fast_phase(basis, tau)(s);
}

}  // namespace aparareal
