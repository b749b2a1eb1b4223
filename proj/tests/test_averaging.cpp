#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "aparareal/averaging.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace aparareal;
using testing_support::max_abs;
using testing_support::max_abs_diff;
using testing_support::random_smooth_state;

namespace {

double bump_integral() {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(
      [](double s) { return std::exp(-1.0 / (s * (1.0 - s))); }, 0.0, 1.0, 1e-14);
}

// int_0^1 rho(s) exp(i a s) ds by adaptive quadrature of both parts.
std::complex<double> continuous_suppression(double a) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double re = integrator.integrate(
      [a](double s) { return bump_kernel(s) * std::cos(a * s); }, 0.0, 1.0, 1e-15);
  const double im = integrator.integrate(
      [a](double s) { return bump_kernel(s) * std::sin(a * s); }, 0.0, 1.0, 1e-15);
  return {re, im};
}

}  // namespace

TEST_CASE("bump kernel normalization constant") {
  const double oracle = 1.0 / bump_integral();
  CHECK(std::abs(kBumpNormalization - oracle) < 1e-9 * oracle);
  CHECK(kBumpNormalization == doctest::Approx(142.25).epsilon(1e-3));
}

TEST_CASE("bump kernel values") {
  CHECK(bump_kernel(0.0) == 0.0);
  CHECK(bump_kernel(1.0) == 0.0);
  CHECK(bump_kernel(-0.5) == 0.0);
  CHECK(bump_kernel(1.5) == 0.0);
  CHECK(bump_kernel(0.5) == doctest::Approx(kBumpNormalization * std::exp(-4.0)));
  CHECK(bump_kernel(0.5) == doctest::Approx(2.6054).epsilon(1e-4));
  for (double s : {0.1, 0.25, 0.4}) {
    CHECK(bump_kernel(s) == doctest::Approx(bump_kernel(1.0 - s)).epsilon(1e-12));
  }
}

TEST_CASE("kernel construction") {
  CHECK_THROWS_AS(make_kernel(0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_kernel(1, 1.0), ConfigError);
  CHECK_THROWS_AS(make_kernel(10, 0.0), ConfigError);
  CHECK_THROWS_AS(make_kernel(10, -2.0), ConfigError);

  const AveragingKernel two = make_kernel(2, 4.0);
  CHECK(two.nodes == std::vector<double>{0.0, 2.0});
  CHECK(two.weights == std::vector<double>{0.0, 1.0});

  const AveragingKernel k = make_kernel(450, 3.0);
  CHECK(k.nodes.size() == 450);
  CHECK(k.nodes.front() == 0.0);
  CHECK(k.nodes.back() == doctest::Approx(3.0 * 449.0 / 450.0));
  CHECK(k.weights.front() == 0.0);
  for (std::size_t m = 1; m < 450; ++m) {
    CHECK(k.weights[m] >= 0.0);
    if (m != 225) CHECK(std::abs(k.weights[m] - k.weights[450 - m]) < 1e-12);
  }

  for (std::size_t mbar : {2, 3, 7, 10, 64, 101, 400, 450, 1000}) {
    for (double window : {0.3, 1.0, 3.0, 300.0}) {
      const AveragingKernel kk = make_kernel(mbar, window);
      double sum = 0.0;
      for (double w : kk.weights) sum += w;
      CHECK(sum == 1.0);
    }
  }
}

TEST_CASE("oscillation suppression") {
  const AveragingKernel k = make_kernel(400, 3.0);
  CHECK(oscillation_suppression(0.0, k) == Complex(1.0, 0.0));
  for (double lambda : {0.5, 3.0, 17.0, 40.0}) {
    CHECK(std::abs(std::abs(oscillation_suppression(lambda, k)) -
                   std::abs(oscillation_suppression(-lambda, k))) < 1e-12);
  }
  // against the continuous transform: the discrete sum is spectrally accurate
  for (double a : {5.0, 20.0, 60.0, 100.0}) {
    const Complex discrete = oscillation_suppression(a / 3.0, k);
    CHECK(std::abs(discrete - continuous_suppression(a)) < 1e-12);
  }
  CHECK(std::abs(continuous_suppression(100.0)) == doctest::Approx(3.926e-6).epsilon(1e-3));
  // rapid decay in lambda * T0
  CHECK(std::abs(oscillation_suppression(10.0 / 3.0, k)) > std::abs(oscillation_suppression(30.0 / 3.0, k)));
  CHECK(std::abs(oscillation_suppression(30.0 / 3.0, k)) > std::abs(oscillation_suppression(100.0 / 3.0, k)));
}

TEST_CASE("averaged nonlinearity") {
  const GridSpec g{32};
  const WaveBasis b(g, {0.1, 1.0, 1e-4});

  SUBCASE("constant state") {
    SpectralState s(32);
    s(Field::v1, 0) = 0.3;
    s(Field::v2, 0) = -1.0;
    s(Field::h, 0) = 0.5;
    for (const Complex& c : averaged_nonlinear(s, make_kernel(50, 3.0), b).coefficients()) {
      CHECK(std::abs(c) < 1e-15);
    }
  }
  SUBCASE("single effective node") {
    const SpectralState s = random_smooth_state(g, 5);
    const AveragingKernel k = make_kernel(2, 1.4);
    const SpectralState direct =
        fast_phase(nonlinear_term(fast_phase(s, -0.7, b), g), 0.7, b);
    CHECK(max_abs_diff(averaged_nonlinear(s, k, b), direct) < 1e-13 * max_abs(direct));
  }
  SUBCASE("explicit weighted sum") {
    const SpectralState s = random_smooth_state(g, 6);
    const AveragingKernel k = make_kernel(12, 2.0);
    SpectralState sum(32);
    for (std::size_t m = 0; m < 12; ++m) {
      sum.add_scaled(k.weights[m], fast_phase(nonlinear_term(fast_phase(s, -k.nodes[m], b), g),
                                              k.nodes[m], b));
    }
    CHECK(max_abs_diff(averaged_nonlinear(s, k, b), sum) < 1e-13 * max_abs(sum));
  }
  SUBCASE("dense quadrature oracle on a single-mode state") {
    const SpectralState s = testing_support::sample(g, [](Field f, double x) {
      switch (f) {
        case Field::v1: return 0.4 * std::cos(3 * x);
        case Field::v2: return 0.2 * std::sin(3 * x);
        default: return 0.7 * std::sin(3 * x + 0.3);
      }
    });
    const SpectralState coarse = averaged_nonlinear(s, make_kernel(50, 3.0), b);
    const SpectralState dense = averaged_nonlinear(s, make_kernel(500, 3.0), b);
    CHECK(testing_support::rel_diff(coarse, dense, g) <= 1e-8);
  }
  SUBCASE("quadratic, real, dealiased, worker independent") {
    const SpectralState s = random_smooth_state(g, 8);
    const AveragingKernel k = make_kernel(40, 5.0);
    const SpectralState one = averaged_nonlinear(s, k, b);
    const SpectralState scaled = averaged_nonlinear(-2.5 * s, k, b);
    CHECK(max_abs_diff(scaled, 6.25 * one) < 1e-12 * max_abs(scaled));
    CHECK(conjugate_asymmetry(one, g) < 1e-14);
    for (std::size_t j = 0; j < 32; ++j) {
      if (!g.retained(g.wavenumber(j))) CHECK(one.mode(j).norm() == 0.0);
    }
    CHECK(averaged_nonlinear(s, k, b, 4) == one);
  }
  SUBCASE("short window tends to the plain nonlinearity") {
    const SpectralState s = random_smooth_state(g, 9);
    const SpectralState n = nonlinear_term(s, g);
    const SpectralState a = averaged_nonlinear(s, make_kernel(20, 1e-7), b);
    CHECK(max_abs_diff(a, n) < 1e-5 * max_abs(n));
  }
  CHECK_THROWS_AS(averaged_nonlinear(SpectralState(16), make_kernel(4, 1.0), b), ConfigError);
}
