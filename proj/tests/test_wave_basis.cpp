#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "aparareal/wave_basis.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace aparareal;
using testing_support::max_abs;
using testing_support::max_abs_diff;
using testing_support::random_smooth_state;

namespace {
constexpr Complex kI{0.0, 1.0};
}

TEST_CASE("mode basis diagonalizes the symbol") {
  for (double kappa : {0.0, 1.0, -2.0, 9.0, 31.0}) {
    for (double froude : {1.0, 2.5}) {
      const ModeBasis m = mode_basis(static_cast<int>(kappa), kappa, froude);
      const Eigen::Matrix3cd l = symbol_L(kappa, froude);
      CHECK((m.eigvecs.adjoint() * m.eigvecs - Eigen::Matrix3cd::Identity()).norm() < 1e-14);
      CHECK((m.eigvecs_inv * m.eigvecs - Eigen::Matrix3cd::Identity()).norm() < 1e-14);
      for (int a = 0; a < 3; ++a) {
        const Eigen::Vector3cd r = m.eigvecs.col(a);
        CHECK((l * r - kI * m.omegas[a] * r).norm() < 1e-13 * (1 + std::abs(kappa)));
        // phase convention: the largest entry is real and positive
        Eigen::Index pivot;
        r.cwiseAbs().maxCoeff(&pivot);
        CHECK(std::abs(r(pivot).imag()) < 1e-15);
        CHECK(r(pivot).real() > 0.0);
      }
      const double w = std::sqrt(1.0 + kappa * kappa / froude);
      CHECK(m.omegas[0] == doctest::Approx(-w));
      CHECK(m.omegas[1] == 0.0);
      CHECK(m.omegas[2] == doctest::Approx(w));
    }
  }
}

TEST_CASE("basis layout") {
  const GridSpec g{16};
  const WaveBasis b(g, {0.1, 1.0, 1e-3});
  CHECK(b.size() == 16);
  CHECK(b.mode(g.index_of(3)).k == 3);
  CHECK(b.mode(g.index_of(-3)).wavenumber == doctest::Approx(-3.0));
  CHECK(b.mode(g.index_of(8)).wavenumber == 0.0);  // Nyquist
  CHECK(b.dissipation_rate(g.index_of(2)) == doctest::Approx(-16e-3));
  CHECK_THROWS_AS(b.check_compatible(SpectralState(8)), ConfigError);
  CHECK_THROWS_AS(WaveBasis(GridSpec{7}, Params{}), ConfigError);
  CHECK_THROWS_AS(WaveBasis(g, Params{-1.0, 1.0, 0.0}), ConfigError);
}

TEST_CASE("propagator matches the matrix exponential") {
  const GridSpec g{32};
  const Params p{0.1, 1.0, 1e-3};
  const WaveBasis b(g, p);
  const double t = 0.37;
  const LinearPropagator full(b, t, {true, true});
  const LinearPropagator fast(b, t, {true, false});
  const LinearPropagator diss(b, t, {false, true});
  for (std::size_t j = 0; j < 32; ++j) {
    const double kappa = b.mode(j).wavenumber;
    const Eigen::Matrix3cd a =
        -symbol_L(kappa, 1.0) / p.epsilon +
        symbol_D(kappa, p.mu) * Eigen::Matrix3cd::Identity();
    const Eigen::Matrix3cd oracle = (t * a).exp();
    CHECK((full.matrix(j) - oracle).norm() < 1e-12);
    const Eigen::Matrix3cd fast_oracle = (-t / p.epsilon * symbol_L(kappa, 1.0)).exp();
    CHECK((fast.matrix(j) - fast_oracle).norm() < 1e-12);
    CHECK((diss.matrix(j) - std::exp(symbol_D(kappa, p.mu) * t) *
                                 Eigen::Matrix3cd::Identity()).norm() < 1e-15);
    const Eigen::Matrix3cd phase_oracle = (0.8 * symbol_L(kappa, 1.0)).exp();
    CHECK((LinearPropagator::fast_phase(b, 0.8).matrix(j) - phase_oracle).norm() < 1e-12);
  }
}

TEST_CASE("propagator group properties") {
  const GridSpec g{32};
  const WaveBasis b(g, {0.05, 1.0, 1e-3});
  const SpectralState s = random_smooth_state(g, 11);

  SUBCASE("semigroup") {
    const SpectralState two = propagate(propagate(s, 0.2, b, true, true), 0.3, b, true, true);
    const SpectralState one = propagate(s, 0.5, b, true, true);
    CHECK(max_abs_diff(one, two) < 1e-13 * max_abs(s));
  }
  SUBCASE("inverse and zero time") {
    const SpectralState back = propagate(propagate(s, 0.7, b, true, false), -0.7, b, true, false);
    CHECK(max_abs_diff(back, s) < 1e-13 * max_abs(s));
    CHECK(max_abs_diff(propagate(s, 0.0, b, true, true), s) < 1e-15 * max_abs(s));
  }
  SUBCASE("fast flow equals the eps-free phase at tau = -t / eps") {
    const SpectralState a = propagate(s, 0.3, b, true, false);
    const SpectralState c = fast_phase(s, -0.3 / 0.05, b);
    CHECK(max_abs_diff(a, c) < 1e-12 * max_abs(s));
  }
  SUBCASE("reality and norm") {
    const SpectralState a = propagate(s, 1.3, b, true, false);
    CHECK(conjugate_asymmetry(a, g) < 1e-14);
    for (std::size_t j = 0; j < 32; ++j) {
      CHECK(a.mode(j).norm() == doctest::Approx(s.mode(j).norm()).epsilon(1e-13));
    }
  }
  SUBCASE("dissipation decays every mode") {
    const SpectralState a = propagate(s, 2.0, b, false, true);
    for (std::size_t j = 1; j < 32; ++j) {
      if (s.mode(j).norm() > 0) CHECK(a.mode(j).norm() < s.mode(j).norm());
    }
    CHECK(a.mode(0) == s.mode(0));
  }
  SUBCASE("geostrophic balance is steady") {
    // v1 = 0, v2 = h_x is in the kernel of L
    SpectralState bal(32);
    for (std::size_t j = 0; j < 32; ++j) {
      const Complex hk = s(Field::h, j);
      bal(Field::h, j) = hk;
      bal(Field::v2, j) = kI * b.mode(j).wavenumber * hk;
    }
    CHECK(max_abs_diff(propagate(bal, 3.0, b, true, false), bal) < 1e-13 * max_abs(bal));
  }
  CHECK_THROWS_AS(propagate(SpectralState(16), 0.1, b, true, true), ConfigError);
}
