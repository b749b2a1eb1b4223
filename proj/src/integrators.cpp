#include "aparareal/integrators.hpp"

#include <cmath>
#include <string>

namespace aparareal {

namespace {

constexpr Complex kI{0.0, 1.0};

NonlinearFn or_default(NonlinearFn fn, const WaveBasis& basis) {
  return fn ? std::move(fn) : default_nonlinearity(basis);
}

}  // namespace

NonlinearFn default_nonlinearity(const WaveBasis& basis) {
  return [grid = basis.grid()](const SpectralState& s) {
    return nonlinear_term(s, grid);
  };
}

// ----------------------------------------------------------------- configs

void CoarseConfig::validate() const {
  if (!(delta_T >= 0.0) || !std::isfinite(delta_T)) {
    throw ConfigError("coarse step must be non-negative and finite");
  }
  if (kernel.num_nodes < 2 || kernel.weights.size() != kernel.num_nodes ||
      kernel.nodes.size() != kernel.num_nodes || !(kernel.window > 0.0)) {
    throw ConfigError("coarse solver needs a valid averaging kernel");
  }
}

FineConfig FineConfig::for_slice(double delta_T, double delta_t) {
  if (!(delta_t > 0.0) || !(delta_T > 0.0)) {
    throw ConfigError("time steps must be positive");
  }
  const double ratio = delta_T / delta_t;
  const double steps = std::round(ratio);
  if (steps < 1.0 ||
      std::abs(steps * delta_t - delta_T) > 1e-12 * std::max(1.0, delta_T)) {
    throw ConfigError("coarse step " + std::to_string(delta_T) +
                      " is not an integer multiple of the fine step " +
                      std::to_string(delta_t));
  }
  return {delta_t, static_cast<std::size_t>(steps)};
}

void FineConfig::validate() const {
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
    throw ConfigError("fine step must be positive and finite");
  }
  if (steps_per_slice == 0) {
    throw ConfigError("fine solver needs at least one step per slice");
  }
}

// ------------------------------------------------------------------ coarse

CoarseStepper::CoarseStepper(const WaveBasis& basis, CoarseConfig config)
    : basis_(&basis),
      config_(std::move(config)),
      half_dissipation_(basis, 0.5 * config_.delta_T, {false, true}),
      fast_map_back_(basis, config_.delta_T, {true, false}) {
  config_.validate();
}

SpectralState CoarseStepper::step(const SpectralState& u0) const {
  basis_->check_compatible(u0);
  const double dT = config_.delta_T;
  const auto average = [&](const SpectralState& s) {
    return averaged_nonlinear(s, config_.kernel, *basis_, config_.workers);
  };

  SpectralState v = half_dissipation_(u0);
  SpectralState stage = v;
  stage.add_scaled(0.5 * dT, average(v));
  v.add_scaled(dT, average(stage));
  half_dissipation_.apply(v);
  fast_map_back_.apply(v);
  return v;
}

// ------------------------------------------------------------------ Strang

StrangStepper::StrangStepper(const WaveBasis& basis, double dt,
                             NonlinearFn nonlinear)
    : dt_(dt),
      nonlinear_(or_default(std::move(nonlinear), basis)),
      half_step_(basis, 0.5 * dt, {true, true}) {}

SpectralState StrangStepper::step(const SpectralState& u) const {
  SpectralState v = half_step_(u);
  SpectralState stage = v;
  stage.add_scaled(0.5 * dt_, nonlinear_(v));
  v.add_scaled(dt_, nonlinear_(stage));
  half_step_.apply(v);
  return v;
}

SpectralState StrangStepper::run(const SpectralState& u,
                                 std::size_t steps) const {
  SpectralState state = u;
  for (std::size_t m = 0; m < steps; ++m) state = step(state);
  return state;
}

// ------------------------------------------------------------------ ETDRK4

Complex phi_function(int j, Complex z) {
  if (std::abs(z) < 1.0) {
    // Taylor series; 30 terms reach round-off for |z| < 1.
    Complex term = 1.0;
    for (int n = 2; n <= j; ++n) term /= static_cast<double>(n);
    Complex sum = term;
    for (int n = 1; n <= 30; ++n) {
      term *= z / static_cast<double>(n + j);
      sum += term;
    }
    return sum;
  }
  Complex phi = std::exp(z);
  double factorial = 1.0;
  for (int n = 1; n <= j; ++n) {
    phi = (phi - 1.0 / factorial) / z;
    factorial *= static_cast<double>(n);
  }
  return phi;
}

Etdrk4Stepper::Etdrk4Stepper(const WaveBasis& basis, double dt,
                             NonlinearFn nonlinear)
    : dt_(dt), nonlinear_(or_default(std::move(nonlinear), basis)) {
  const double eps = basis.params().epsilon;
  coeffs_.reserve(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& mode = basis.mode(j);
    std::array<Complex, 3> full, half, half_phi1, f1, f2, f3;
    for (std::size_t a = 0; a < 3; ++a) {
      const Complex lambda =
          -kI * mode.omegas[a] / eps + basis.dissipation_rate(j);
      const Complex z = dt * lambda;
      const Complex p1 = phi_function(1, z);
      const Complex p2 = phi_function(2, z);
      const Complex p3 = phi_function(3, z);
      full[a] = std::exp(z);
      half[a] = std::exp(0.5 * z);
      half_phi1[a] = 0.5 * dt * phi_function(1, 0.5 * z);
      f1[a] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
      f2[a] = dt * (p2 - 2.0 * p3);
      f3[a] = dt * (-p2 + 4.0 * p3);
    }
    coeffs_.push_back({spectral_function(mode, full),
                       spectral_function(mode, half),
                       spectral_function(mode, half_phi1),
                       spectral_function(mode, f1), spectral_function(mode, f2),
                       spectral_function(mode, f3)});
  }
}

SpectralState Etdrk4Stepper::step(const SpectralState& u) const {
  const std::size_t n = coeffs_.size();
  if (u.num_modes() != n) throw ConfigError("ETDRK4 stepper/state size mismatch");

  const SpectralState nu = nonlinear_(u);
  SpectralState a(n), b(n), c(n), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& k = coeffs_[j];
    a.set_mode(j, k.half * u.mode(j) + k.half_phi1 * nu.mode(j));
  }
  const SpectralState na = nonlinear_(a);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& k = coeffs_[j];
    b.set_mode(j, k.half * u.mode(j) + k.half_phi1 * na.mode(j));
  }
  const SpectralState nb = nonlinear_(b);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& k = coeffs_[j];
    c.set_mode(j, k.half * a.mode(j) +
                      k.half_phi1 * (2.0 * nb.mode(j) - nu.mode(j)));
  }
  const SpectralState nc = nonlinear_(c);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& k = coeffs_[j];
    out.set_mode(j, k.full * u.mode(j) + k.f1 * nu.mode(j) +
                        2.0 * (k.f2 * (na.mode(j) + nb.mode(j))) +
                        k.f3 * nc.mode(j));
  }
  return out;
}

SpectralState Etdrk4Stepper::run(const SpectralState& u,
                                 std::size_t steps) const {
  SpectralState state = u;
  for (std::size_t m = 0; m < steps; ++m) state = step(state);
  return state;
}

// ------------------------------------------------------ integrating factor

IntegratingFactorStepper::IntegratingFactorStepper(const WaveBasis& basis,
                                                   double dt,
                                                   NonlinearFn nonlinear)
    : dt_(dt),
      nonlinear_(or_default(std::move(nonlinear), basis)),
      half_(basis, 0.5 * dt, {true, true}),
      full_(basis, dt, {true, true}) {}

SpectralState IntegratingFactorStepper::step(const SpectralState& u) const {
  const double h = dt_;
  const SpectralState n1 = nonlinear_(u);

  SpectralState u2 = u;
  u2.add_scaled(0.5 * h, n1);
  half_.apply(u2);
  const SpectralState n2 = nonlinear_(u2);

  SpectralState u3 = half_(u);
  u3.add_scaled(0.5 * h, n2);
  const SpectralState n3 = nonlinear_(u3);

  SpectralState u4 = full_(u);
  u4.add_scaled(h, half_(n3));
  const SpectralState n4 = nonlinear_(u4);

  SpectralState mid = n2;
  mid += n3;
  SpectralState out = full_(u);
  out.add_scaled(h / 6.0, full_(n1));
  out.add_scaled(h / 3.0, half_(mid));
  out.add_scaled(h / 6.0, n4);
  return out;
}

SpectralState IntegratingFactorStepper::run(const SpectralState& u,
                                            std::size_t steps) const {
  SpectralState state = u;
  for (std::size_t m = 0; m < steps; ++m) state = step(state);
  return state;
}

// --------------------------------------------------------------- one-shots

SpectralState coarse_step(const SpectralState& u0, const CoarseConfig& cfg,
                          const WaveBasis& basis) {
  return CoarseStepper(basis, cfg).step(u0);
}

SpectralState fine_step(const SpectralState& u, double dt,
                        const WaveBasis& basis) {
  basis.check_compatible(u);
  return StrangStepper(basis, dt).step(u);
}

SpectralState fine_run(const SpectralState& u0, const FineConfig& cfg,
                       const WaveBasis& basis) {
  cfg.validate();
  basis.check_compatible(u0);
  return StrangStepper(basis, cfg.delta_t).run(u0, cfg.steps_per_slice);
}

SpectralState etdrk4_step(const SpectralState& u, double dt,
                          const WaveBasis& basis) {
  basis.check_compatible(u);
  return Etdrk4Stepper(basis, dt).step(u);
}

SpectralState integrating_factor_step(const SpectralState& u, double dt,
                                      const WaveBasis& basis) {
  basis.check_compatible(u);
  return IntegratingFactorStepper(basis, dt).step(u);
}

}  // namespace aparareal
