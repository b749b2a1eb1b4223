#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "test_support.hpp"

using namespace aparareal;
using testing_support::random_smooth_state;
using testing_support::sample;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("grid validation and wavenumber layout") {
  CHECK_THROWS_AS(GridSpec{6}.validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec{33}.validate(), ConfigError);
  CHECK_THROWS_AS((GridSpec{32, 2 * pi, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((GridSpec{32, -1.0, 0.5}.validate()), ConfigError);
  CHECK_NOTHROW(GridSpec{8}.validate());

  const GridSpec g{16};
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(8) == 8);
  CHECK(g.wavenumber(9) == -7);
  CHECK(g.wavenumber(15) == -1);
  for (std::size_t i = 0; i < 16; ++i) CHECK(g.index_of(g.wavenumber(i)) == i);
  CHECK(g.max_retained_wavenumber() == 5);
  CHECK(g.retained(5));
  CHECK_FALSE(g.retained(6));
  CHECK_FALSE(g.retained(8));
  CHECK((GridSpec{16, 2 * pi, 1.0}.retained(7)));
  CHECK_FALSE((GridSpec{16, 2 * pi, 1.0}.retained(8)));
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS((Params{0.0, 1.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((Params{1.0, 0.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((Params{1.0, 1.0, -1e-3}.validate()), ConfigError);
  CHECK_THROWS_AS((Params{INFINITY, 1.0, 0.0}.validate()), ConfigError);
  CHECK_NOTHROW((Params{0.01, 1.0, 0.0}.validate()));
}

TEST_CASE("transform round trip and known coefficients") {
  const GridSpec g{64};
  PhysicalState p(64);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : p.values()) v = u(rng);
  const PhysicalState back = to_physical(to_spectral(p, g), g);
  CHECK(max_rel_linf_error(back, p) <= 1e-13);

  const SpectralState s = sample(g, [](Field f, double x) {
    return f == Field::h ? std::sin(3 * x) : (f == Field::v1 ? 2.0 : 0.0);
  });
  CHECK(std::abs(s(Field::h, g.index_of(3)) - Complex(0, -0.5)) < 1e-14);
  CHECK(std::abs(s(Field::h, g.index_of(-3)) - Complex(0, 0.5)) < 1e-14);
  CHECK(std::abs(s(Field::v1, 0) - 2.0) < 1e-14);
  CHECK(conjugate_asymmetry(s, g) == 0.0);

  CHECK_THROWS_AS(to_spectral(PhysicalState(32), g), ConfigError);
  CHECK_THROWS_AS(to_physical(SpectralState(32), g), ConfigError);
}

TEST_CASE("to_physical rejects coefficients of a complex field") {
  const GridSpec g{16};
  SpectralState s(16);
  s(Field::h, g.index_of(2)) = 1.0;
  CHECK_THROWS_AS(to_physical(s, g), NumericError);
}

TEST_CASE("dealias zeroes the top third and the Nyquist mode") {
  const GridSpec g{32};
  SpectralState s(32);
  for (Complex& c : s.coefficients()) c = 1.0;
  apply_dealias(s, g);
  for (std::size_t i = 0; i < 32; ++i) {
    const bool kept = std::abs(g.wavenumber(i)) <= 10;
    CHECK((s(Field::v2, i) != 0.0) == kept);
  }
}

TEST_CASE("nonlinear term against closed forms") {
  const GridSpec g{32};
  SUBCASE("v1 = sin x only") {
    const SpectralState s = sample(g, [](Field f, double x) {
      return f == Field::v1 ? std::sin(x) : 0.0;
    });
    const PhysicalState n = to_physical(nonlinear_term(s, g), g);
    for (std::size_t j = 0; j < 32; ++j) {
      const double x = g.grid_point(j);
      CHECK(n.field(Field::v1)[j] == doctest::Approx(-0.5 * std::sin(2 * x)).epsilon(1e-13));
      CHECK(std::abs(n.field(Field::v2)[j]) < 1e-14);
      CHECK(std::abs(n.field(Field::h)[j]) < 1e-14);
    }
  }
  SUBCASE("advection of v2 and flux of h") {
    const SpectralState s = sample(g, [](Field f, double x) {
      switch (f) {
        case Field::v1: return std::cos(x);
        case Field::v2: return std::sin(2 * x);
        default: return 1.0 + 0.5 * std::cos(3 * x);
      }
    });
    const PhysicalState n = to_physical(nonlinear_term(s, g), g);
    for (std::size_t j = 0; j < 32; ++j) {
      const double x = g.grid_point(j);
      const double v2 = -std::cos(x) * 2 * std::cos(2 * x);
      // (h v1)_x with h v1 = cos x + 0.25 (cos 4x + cos 2x)
      const double flux = -std::sin(x) - std::sin(4 * x) - 0.5 * std::sin(2 * x);
      CHECK(std::abs(n.field(Field::v2)[j] - v2) < 1e-13);
      CHECK(std::abs(n.field(Field::h)[j] + flux) < 1e-13);
    }
  }
  SUBCASE("constant fields give zero") {
    const SpectralState s = sample(g, [](Field, double) { return 0.7; });
    for (const Complex& c : nonlinear_term(s, g).coefficients()) CHECK(std::abs(c) < 1e-15);
  }
  SUBCASE("quadratic and real") {
    const SpectralState s = random_smooth_state(g, 3);
    const SpectralState n1 = nonlinear_term(s, g);
    const SpectralState n3 = nonlinear_term(3.0 * s, g);
    CHECK(testing_support::max_abs_diff(n3, 9.0 * n1) < 1e-12 * testing_support::max_abs(n3));
    CHECK(conjugate_asymmetry(n1, g) < 1e-15);
    for (std::size_t i = 0; i < 32; ++i) {
      if (!g.retained(g.wavenumber(i))) CHECK(n1.mode(i).norm() == 0.0);
    }
  }
}

TEST_CASE("operator symbols") {
  for (double k : {0.0, 1.0, -3.0, 7.5}) {
    for (double froude : {1.0, 0.3}) {
      const Eigen::Matrix3cd l = symbol_L(k, froude);
      CHECK((l + l.adjoint()).norm() < 1e-15);
      Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(l);
      std::vector<double> imag;
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(solver.eigenvalues()(i).real()) < 1e-13);
        imag.push_back(solver.eigenvalues()(i).imag());
      }
      std::sort(imag.begin(), imag.end());
      const double w = std::sqrt(1.0 + k * k / froude);
      CHECK(imag[0] == doctest::Approx(-w).epsilon(1e-13));
      CHECK(std::abs(imag[1]) < 1e-13);
      CHECK(imag[2] == doctest::Approx(w).epsilon(1e-13));
    }
  }
  CHECK(symbol_D(2.0, 1e-4) == doctest::Approx(-16e-4));
  CHECK(symbol_D(0.0, 1e-4) == 0.0);
}

TEST_CASE("relative error and norms") {
  PhysicalState a(8), b(8);
  b.values()[3] = 2.0;
  a.values()[3] = 2.5;
  CHECK(linf_norm(b) == 2.0);
  CHECK(max_rel_linf_error(a, b) == doctest::Approx(0.25));
  CHECK_THROWS_AS(max_rel_linf_error(a, PhysicalState(8)), NumericError);
  CHECK_THROWS_AS(max_rel_linf_error(a, PhysicalState(16)), ConfigError);
}

TEST_CASE("state arithmetic") {
  const GridSpec g{16};
  const SpectralState a = random_smooth_state(g, 1);
  const SpectralState b = random_smooth_state(g, 2);
  SpectralState c = a;
  c.add_scaled(2.0, b);
  CHECK(c == a + 2.0 * b);
  CHECK(testing_support::max_abs(c - a - 2.0 * b) < 1e-15);
  CHECK_THROWS_AS(c += SpectralState(8), ConfigError);
}
