#pragma once

// Periodic pseudospectral representation of the 1-D rotating shallow water
// fields u = (v1, v2, h) and the per-wavenumber symbols of the fast operator L,
// the hyperviscous dissipation D, and the quadratic advection term N.
//
// The full system advanced by every integrator in this library is
//
//   du/dt = -(1/eps) L u + N(u) + D u,
//
// with N(u) = -(v1 v1_x, v1 v2_x, (h v1)_x) and D = -mu d^4/dx^4, which is the
// explicit RSW system with advection moved to the right-hand side and a
// dissipative hyperviscosity.

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "aparareal/errors.hpp"

namespace aparareal {

using Complex = std::complex<double>;

enum class Field : std::size_t { v1 = 0, v2 = 1, h = 2 };
inline constexpr std::size_t kNumFields = 3;
inline constexpr Field kAllFields[] = {Field::v1, Field::v2, Field::h};

/// Uniform periodic grid x_j = L j / K with K spectral coefficients per
/// field. Coefficients are stored in FFT order: index j holds wavenumber j for
/// j <= K/2 and j - K otherwise.
struct GridSpec {
  std::size_t num_modes = 128;
  double domain_length = 2.0 * std::numbers::pi;
  double dealias_fraction = 2.0 / 3.0;

  /// Throws ConfigError unless K is even and >= 8, L > 0 and the dealias
  /// fraction lies in (0, 1].
  void validate() const;

  int wavenumber(std::size_t index) const;
  std::size_t index_of(int k) const;

  /// Physical wavenumber 2 pi k / L that multiplies d/dx.
  double physical_wavenumber(std::size_t index) const;

  /// Dealias mask. The Nyquist mode k = K/2 is never retained because its
  /// odd derivatives are not representable by a real field.
  bool retained(int k) const;
  int max_retained_wavenumber() const;

  double grid_point(std::size_t j) const;

  bool operator==(const GridSpec&) const = default;
};

/// Rossby number eps, Froude parameter F and hyperviscosity mu.
struct Params {
  double epsilon = 1.0;
  double froude = 1.0;
  double mu = 1e-4;

  void validate() const;

  bool operator==(const Params&) const = default;
};

/// Fourier coefficients of (v1, v2, h), field-major, FFT-ordered.
class SpectralState {
 public:
  SpectralState() = default;
  explicit SpectralState(std::size_t num_modes)
      : num_modes_(num_modes), coeffs_(kNumFields * num_modes) {}

  std::size_t num_modes() const noexcept { return num_modes_; }

  std::span<Complex> field(Field f) {
    return {coeffs_.data() + offset(f), num_modes_};
  }
  std::span<const Complex> field(Field f) const {
    return {coeffs_.data() + offset(f), num_modes_};
  }

  Complex& operator()(Field f, std::size_t index) {
    return coeffs_[offset(f) + index];
  }
  const Complex& operator()(Field f, std::size_t index) const {
    return coeffs_[offset(f) + index];
  }

  /// The three field coefficients of one wavenumber as a column vector.
  Eigen::Vector3cd mode(std::size_t index) const {
    return {coeffs_[index], coeffs_[num_modes_ + index],
            coeffs_[2 * num_modes_ + index]};
  }
  void set_mode(std::size_t index, const Eigen::Vector3cd& value) {
    coeffs_[index] = value(0);
    coeffs_[num_modes_ + index] = value(1);
    coeffs_[2 * num_modes_ + index] = value(2);
  }

  std::span<Complex> coefficients() { return coeffs_; }
  std::span<const Complex> coefficients() const { return coeffs_; }

  SpectralState& operator+=(const SpectralState& other);
  SpectralState& operator-=(const SpectralState& other);
  SpectralState& operator*=(double scale);
  /// this += scale * other
  SpectralState& add_scaled(double scale, const SpectralState& other);

  friend SpectralState operator+(SpectralState a, const SpectralState& b) {
    return a += b;
  }
  friend SpectralState operator-(SpectralState a, const SpectralState& b) {
    return a -= b;
  }
  friend SpectralState operator*(double scale, SpectralState a) {
    return a *= scale;
  }

  bool operator==(const SpectralState&) const = default;

 private:
  std::size_t offset(Field f) const {
    return static_cast<std::size_t>(f) * num_modes_;
  }

  std::size_t num_modes_ = 0;
  std::vector<Complex> coeffs_;
};

/// Grid samples of (v1, v2, h), field-major.
class PhysicalState {
 public:
  PhysicalState() = default;
  explicit PhysicalState(std::size_t num_points)
      : num_points_(num_points), values_(kNumFields * num_points) {}

  std::size_t num_points() const noexcept { return num_points_; }

  std::span<double> field(Field f) {
    return {values_.data() + static_cast<std::size_t>(f) * num_points_,
            num_points_};
  }
  std::span<const double> field(Field f) const {
    return {values_.data() + static_cast<std::size_t>(f) * num_points_,
            num_points_};
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool operator==(const PhysicalState&) const = default;

 private:
  std::size_t num_points_ = 0;
  std::vector<double> values_;
};

/// Forward transform, normalized so that the k = 0 coefficient is the mean.
SpectralState to_spectral(const PhysicalState& p, const GridSpec& g);

/// Inverse transform. Throws NumericError if the imaginary part of the
/// synthesized field exceeds 1e-12 of its norm.
PhysicalState to_physical(const SpectralState& s, const GridSpec& g);

/// Zeroes every coefficient outside the dealias mask.
void apply_dealias(SpectralState& s, const GridSpec& g);

/// Pseudospectral -(v1 v1_x, v1 v2_x, (h v1)_x), dealiased.
SpectralState nonlinear_term(const SpectralState& s, const GridSpec& g);

/// Fourier symbol of L for physical wavenumber k.
Eigen::Matrix3cd symbol_L(double k, double froude);

/// Fourier symbol of D: -mu k^4.
double symbol_D(double k, double mu);

double linf_norm(const PhysicalState& p);

/// ||a - b||_inf / ||b||_inf over all three fields jointly.
double max_rel_linf_error(const PhysicalState& a, const PhysicalState& b);

/// max_k |c(-k) - conj(c(k))| over all fields; zero for real fields.
double conjugate_asymmetry(const SpectralState& s, const GridSpec& g);

void check_shape(const SpectralState& s, const GridSpec& g);
void check_shape(const PhysicalState& p, const GridSpec& g);

}  // namespace aparareal
