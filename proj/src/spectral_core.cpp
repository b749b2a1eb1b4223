#include "aparareal/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fourier_transform.hpp"

namespace aparareal {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_size(const SpectralState& a, const SpectralState& b) {
  if (a.num_modes() != b.num_modes()) {
    throw ConfigError("spectral states have different sizes: " +
                      std::to_string(a.num_modes()) + " vs " +
                      std::to_string(b.num_modes()));
  }
}

struct NonlinearScratch {
  std::vector<Complex> spec;
  std::vector<double> v1, v1x, v2x, h, product;

  void resize(std::size_t n) {
    spec.resize(n);
    v1.resize(n);
    v1x.resize(n);
    v2x.resize(n);
    h.resize(n);
    product.resize(n);
  }
};

}  // namespace

// ---------------------------------------------------------------- GridSpec

void GridSpec::validate() const {
  if (num_modes < 8 || num_modes % 2 != 0) {
    throw ConfigError("num_modes must be even and >= 8, got " +
                      std::to_string(num_modes));
  }
  if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
    throw ConfigError("domain_length must be positive and finite");
  }
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
    throw ConfigError("dealias_fraction must lie in (0, 1]");
  }
}

int GridSpec::wavenumber(std::size_t index) const {
  const auto k = static_cast<long>(index);
  const auto n = static_cast<long>(num_modes);
  return static_cast<int>(k <= n / 2 ? k : k - n);
}

std::size_t GridSpec::index_of(int k) const {
  const auto n = static_cast<long>(num_modes);
  return static_cast<std::size_t>(k >= 0 ? k : k + n);
}

double GridSpec::physical_wavenumber(std::size_t index) const {
  return 2.0 * std::numbers::pi / domain_length * wavenumber(index);
}

bool GridSpec::retained(int k) const {
  if (std::abs(k) == static_cast<int>(num_modes / 2)) return false;
  return std::abs(k) <= max_retained_wavenumber();
}

int GridSpec::max_retained_wavenumber() const {
  const double cutoff = dealias_fraction * static_cast<double>(num_modes) / 2.0;
  const int kmax = static_cast<int>(std::floor(cutoff + 1e-9));
  return std::min(kmax, static_cast<int>(num_modes / 2) - 1);
}

double GridSpec::grid_point(std::size_t j) const {
  return domain_length * static_cast<double>(j) /
         static_cast<double>(num_modes);
}

void Params::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be positive and finite");
  }
  if (!(froude > 0.0) || !std::isfinite(froude)) {
    throw ConfigError("froude must be positive and finite");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ConfigError("mu must be non-negative and finite");
  }
}

// ----------------------------------------------------------- SpectralState

SpectralState& SpectralState::operator+=(const SpectralState& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralState& SpectralState::operator-=(const SpectralState& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralState& SpectralState::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralState& SpectralState::add_scaled(double scale,
                                         const SpectralState& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] += scale * other.coeffs_[i];
  }
  return *this;
}

// -------------------------------------------------------------- transforms

void check_shape(const SpectralState& s, const GridSpec& g) {
  if (s.num_modes() != g.num_modes) {
    throw ConfigError("spectral state has " + std::to_string(s.num_modes()) +
                      " modes, grid expects " + std::to_string(g.num_modes));
  }
}

void check_shape(const PhysicalState& p, const GridSpec& g) {
  if (p.num_points() != g.num_modes) {
    throw ConfigError("physical state has " + std::to_string(p.num_points()) +
                      " points, grid expects " + std::to_string(g.num_modes));
  }
}

SpectralState to_spectral(const PhysicalState& p, const GridSpec& g) {
  check_shape(p, g);
  const auto& fft = detail::FourierTransform::for_size(g.num_modes);
  SpectralState s(g.num_modes);
  for (Field f : kAllFields) fft.forward(p.field(f), s.field(f));
  return s;
}

PhysicalState to_physical(const SpectralState& s, const GridSpec& g) {
  check_shape(s, g);
  const auto& fft = detail::FourierTransform::for_size(g.num_modes);
  PhysicalState p(g.num_modes);
  std::vector<Complex> synthesized(g.num_modes);
  for (Field f : kAllFields) {
    fft.inverse_complex(s.field(f), synthesized);
    double real_norm = 0.0;
    double imag_norm = 0.0;
    auto out = p.field(f);
    for (std::size_t j = 0; j < g.num_modes; ++j) {
      out[j] = synthesized[j].real();
      real_norm = std::max(real_norm, std::abs(synthesized[j].real()));
      imag_norm = std::max(imag_norm, std::abs(synthesized[j].imag()));
    }
    if (imag_norm > 1e-12 * std::max(real_norm, 1e-300) && imag_norm > 1e-300) {
      throw NumericError("inverse transform is not real: imaginary residue " +
                         std::to_string(imag_norm) + " vs field norm " +
                         std::to_string(real_norm));
    }
  }
  return p;
}

void apply_dealias(SpectralState& s, const GridSpec& g) {
  check_shape(s, g);
  for (std::size_t j = 0; j < g.num_modes; ++j) {
    if (g.retained(g.wavenumber(j))) continue;
    for (Field f : kAllFields) s(f, j) = 0.0;
  }
}

SpectralState nonlinear_term(const SpectralState& s, const GridSpec& g) {
  check_shape(s, g);
  const std::size_t n = g.num_modes;
  const auto& fft = detail::FourierTransform::for_size(n);
  thread_local NonlinearScratch scratch;
  scratch.resize(n);

  const auto v1_hat = s.field(Field::v1);
  const auto v2_hat = s.field(Field::v2);

  fft.inverse(v1_hat, scratch.v1);
  fft.inverse(s.field(Field::h), scratch.h);
  for (std::size_t j = 0; j <= n / 2; ++j) {
    scratch.spec[j] = kI * g.physical_wavenumber(j) * v1_hat[j];
  }
  fft.inverse(scratch.spec, scratch.v1x);
  for (std::size_t j = 0; j <= n / 2; ++j) {
    scratch.spec[j] = kI * g.physical_wavenumber(j) * v2_hat[j];
  }
  fft.inverse(scratch.spec, scratch.v2x);

  SpectralState out(n);
  for (std::size_t j = 0; j < n; ++j) {
    scratch.product[j] = -scratch.v1[j] * scratch.v1x[j];
  }
  fft.forward(scratch.product, out.field(Field::v1));
  for (std::size_t j = 0; j < n; ++j) {
    scratch.product[j] = -scratch.v1[j] * scratch.v2x[j];
  }
  fft.forward(scratch.product, out.field(Field::v2));
  for (std::size_t j = 0; j < n; ++j) {
    scratch.product[j] = scratch.h[j] * scratch.v1[j];
  }
  auto flux = out.field(Field::h);
  fft.forward(scratch.product, flux);
  for (std::size_t j = 0; j < n; ++j) {
    flux[j] *= -kI * g.physical_wavenumber(j);
  }

  apply_dealias(out, g);
  return out;
}

// ----------------------------------------------------------------- symbols

Eigen::Matrix3cd symbol_L(double k, double froude) {
  const Complex d = kI * k / std::sqrt(froude);
  Eigen::Matrix3cd m;
  m << 0.0, -1.0, d,
       1.0, 0.0, 0.0,
       d, 0.0, 0.0;
  return m;
}

double symbol_D(double k, double mu) {
  const double k2 = k * k;
  return -mu * k2 * k2;
}

// ------------------------------------------------------------------ norms

double linf_norm(const PhysicalState& p) {
  double m = 0.0;
  for (double v : p.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_rel_linf_error(const PhysicalState& a, const PhysicalState& b) {
  if (a.num_points() != b.num_points()) {
    throw ConfigError("physical states have different sizes");
  }
  const double reference = linf_norm(b);
  if (!(reference > 0.0)) {
    throw NumericError("relative error undefined: reference norm is zero");
  }
  double diff = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    diff = std::max(diff, std::abs(av[i] - bv[i]));
  }
  return diff / reference;
}

double conjugate_asymmetry(const SpectralState& s, const GridSpec& g) {
  check_shape(s, g);
  double worst = 0.0;
  for (Field f : kAllFields) {
    const auto c = s.field(f);
    for (std::size_t j = 0; j < g.num_modes; ++j) {
      const std::size_t mirror = (g.num_modes - j) % g.num_modes;
      worst = std::max(worst, std::abs(c[mirror] - std::conj(c[j])));
    }
  }
  return worst;
}

}  // namespace aparareal
