#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "logplate/constants.hpp"
#include "logplate/error.hpp"
#include "logplate/rng.hpp"

using namespace logplate;

TEST_CASE("critical exponent and Talenti constant at N = 8 are exact") {
  CHECK(critical_exponent(8) == 4.0);
  CHECK(critical_exponent(5) == 10.0);
  CHECK(critical_exponent(6) == 6.0);
  const double C = talenti_constant(8);
  CHECK(C * C == 1920.0);
}

TEST_CASE("Talenti constant squared is N(N-4)(N^2-4) to the power (N-4)/4") {
  for (int N = 5; N <= 12; ++N) {
    const double expected = std::pow(static_cast<double>(N) * (N - 4) * (N * N - 4), (N - 4) / 4.0);
    CHECK(talenti_constant(N) * talenti_constant(N) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("gamma_half matches tgamma") {
  for (int k = 1; k <= 30; ++k) CHECK(gamma_half(k) == doctest::Approx(std::tgamma(0.5 * k)).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_half(0), InvalidArgument);
}

TEST_CASE("sphere area: closed forms and Monte Carlo volume") {
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(sphere_area(8) == doctest::Approx(std::pow(std::numbers::pi, 4) / 3.0));
  // |B_1| in R^5 by sampling the cube [-1, 1]^5.
  Rng rng(7);
  const int samples = 400000;
  int inside = 0;
  for (int k = 0; k < samples; ++k) {
    double r2 = 0.0;
    for (int d = 0; d < 5; ++d) {
      const double x = rng.uniform(-1.0, 1.0);
      r2 += x * x;
    }
    if (r2 <= 1.0) ++inside;
  }
  const double frac = static_cast<double>(inside) / samples;
  const double estimate = 32.0 * frac;
  const double sigma = 32.0 * std::sqrt(frac * (1.0 - frac) / samples);
  CHECK(std::abs(estimate - ball_volume(5, 1.0)) < 4.0 * sigma);
  CHECK(ball_volume(5, 2.0) == doctest::Approx(32.0 * ball_volume(5, 1.0)));
}

TEST_CASE("S^{N/4}: closed form and quadrature agree, N = 5..10") {
  for (int N = 5; N <= 10; ++N) {
    const double a = sobolev_pow_closed(N);
    const double b = sobolev_pow_quadrature(N);
    CHECK(std::abs(a - b) <= 1e-6 * a);
    CHECK(sobolev_pow(N) == a);
  }
}

TEST_CASE("S^{N/4} equals the critical norm of the unit bubble") {
  // For the extremal, |Delta U|_2^2 = |U|_{2**}^{2**}; integrate the second
  // with an adaptive rule in r = tan(theta).
  for (int N : {5, 7, 9}) {
    const double p = critical_exponent(N);
    const double C = talenti_constant(N);
    auto f = [&](double th) {
      const double r = std::tan(th);
      const double sec2 = 1.0 + r * r;
      return std::pow(r, N - 1) * std::pow(C, p) * std::pow(sec2, -0.5 * (N - 4) * p) * sec2;
    };
    double err = 0.0;
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, 0.5 * std::numbers::pi, 15, 1e-13, &err);
    CHECK(sphere_area(N) * I == doctest::Approx(sobolev_pow(N)).epsilon(1e-9));
  }
}

TEST_CASE("threshold c(S) is (2/N) S^{N/4}") {
  CHECK(threshold_cS(10.0, 5) == doctest::Approx(4.0));
  CHECK_THROWS_AS(threshold_cS(0.0, 5), InvalidArgument);
}

TEST_CASE("Params validation") {
  CHECK_NOTHROW(validate(Params{5, 0.0, 1.0, 1.0}));
  CHECK_THROWS_AS(validate(Params{4, 0.0, 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(validate(Params{5, 0.0, 1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(validate(Params{5, std::numeric_limits<double>::quiet_NaN(), 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(validate(Params{5, 0.0, std::numeric_limits<double>::infinity(), 1.0}), InvalidArgument);
}

TEST_CASE("make_constants fills every field consistently") {
  const Constants c = make_constants(Params{6, 0.0, 1.0, 2.0}, 512);
  CHECK(c.N == 6);
  CHECK(c.R == 2.0);
  CHECK(c.p_crit == 6.0);
  CHECK(c.volume == doctest::Approx(ball_volume(6, 2.0)));
  CHECK(c.cS == doctest::Approx(2.0 / 6.0 * c.S_pow));
  CHECK(c.lambda1 > 0.0);
  CHECK(c.lambda1_lap > 0.0);
}
