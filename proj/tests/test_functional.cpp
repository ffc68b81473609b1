#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "logplate/constants.hpp"
#include "logplate/corpus.hpp"
#include "logplate/discretization.hpp"
#include "logplate/error.hpp"
#include "logplate/functional.hpp"
#include "logplate/rng.hpp"

using namespace logplate;

namespace {

RadialFunction scaled(const RadialFunction& u, double t) {
  RadialFunction v = u;
  for (double& x : v.values) x *= t;
  return v;
}

RadialFunction combine(const RadialFunction& u, double h, const RadialFunction& phi) {
  RadialFunction v = u;
  for (int i = 0; i < v.size(); ++i) v.values[i] += h * phi.values[i];
  return v;
}

}  // namespace

TEST_CASE("energy: zero, evenness and the fibering identity") {
  const Params p{6, 3.0, 0.7, 1.0};
  const Functional F(p, make_uniform(1.0, 512));
  CHECK(F.energy(RadialFunction::zeros(F.grid())) == 0.0);
  Rng rng(11);
  for (int k = 0; k < 10; ++k) {
    const RadialFunction u = random_profile(F.grid(), rng);
    RadialFunction a = u;
    for (double& x : a.values) x = std::abs(x);
    CHECK(F.energy(scaled(u, -1.0)) == F.energy(u));
    // The nonlinear moments only see |u|.
    const auto su = F.scalars(u);
    const auto sa = F.scalars(a);
    CHECK(sa.l2 == su.l2);
    CHECK(sa.logmom == su.logmom);
    CHECK(sa.crit == su.crit);
    for (double t : {0.5, 1.0, 2.0}) {
      const double e = F.energy(scaled(u, t));
      CHECK(F.fibering(u, t) == doctest::Approx(e).epsilon(1e-12));
    }
  }
}

TEST_CASE("fibering limits") {
  const Params p{5, 10.0, 2.0, 1.0};
  const Functional F(p, make_uniform(1.0, 256));
  Rng rng(3);
  const auto u = random_bump(F.grid(), rng);
  CHECK(std::abs(F.fibering(u, 1e-8)) < 1e-12);
  CHECK(F.fibering(u, 1e3) < 0.0);
  CHECK_THROWS_AS(F.fibering(u, 0.0), InvalidArgument);
  CHECK_THROWS_AS(F.fibering_derivs(u, -1.0), InvalidArgument);
}

TEST_CASE("fibering derivatives: finite differences and the residual pairing") {
  const Params p{7, 5.0, -0.4, 1.0};
  const Functional F(p, make_uniform(1.0, 512));
  Rng rng(5);
  const auto u = random_bump(F.grid(), rng);
  for (double t : {0.3, 1.0, 1.7}) {
    const auto [d1, d2] = F.fibering_derivs(u, t);
    const double h = 1e-6;
    CHECK(d1 == doctest::Approx((F.fibering(u, t + h) - F.fibering(u, t - h)) / (2 * h)).epsilon(1e-6));
    const double fd2 = (F.fibering_derivs(u, t + h).first - F.fibering_derivs(u, t - h).first) / (2 * h);
    CHECK(d2 == doctest::Approx(fd2).epsilon(1e-6));
    const auto tu = scaled(u, t);
    CHECK(F.nehari_gap(tu) == doctest::Approx(t * d1).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("gradient check: central differences with observed order 2 over 20 pairs") {
  const Params p{5, 40.0, 1.5, 1.0};
  const Functional F(p, make_uniform(1.0, 512));
  const Rng root(2024);
  for (int k = 0; k < 20; ++k) {
    Rng rng = root.split(k);
    const auto u = random_bump(F.grid(), rng);
    // A relative perturbation keeps u + h phi positive, where the energy is smooth.
    const double freq = rng.uniform(1.0, 8.0);
    const double c = rng.uniform(0.0, 6.0);
    RadialFunction phi = u;
    for (int j = 0; j < phi.size(); ++j) phi.values[j] *= std::cos(freq * (*F.grid())[j] + c);
    const double exact = F.pairing(u, phi);
    auto cd = [&](double h) { return (F.energy(combine(u, h, phi)) - F.energy(combine(u, -h, phi))) / (2 * h); };
    const double e5 = std::abs(cd(1e-5) - exact) / (1.0 + std::abs(exact));
    CHECK(e5 <= 1e-6);
    const double e2 = std::abs(cd(0.025) - exact);
    const double e1 = std::abs(cd(0.05) - exact);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("energy_difference agrees with the plain difference") {
  const Params p{6, 1.0, 0.5, 1.0};
  const Functional F(p, make_uniform(1.0, 256));
  Rng rng(9);
  const auto u = random_bump(F.grid(), rng);
  const auto v = random_bump(F.grid(), rng);
  CHECK(F.energy_difference(u, v) == doctest::Approx(F.energy(v) - F.energy(u)).epsilon(1e-11));
  CHECK(F.energy_difference(u, u) == 0.0);
}

TEST_CASE("residual: zero at the origin and Riesz identity") {
  const Params p{5, 2.0, 1.0, 1.0};
  const Functional F(p, make_uniform(1.0, 256));
  CHECK(F.residual(RadialFunction::zeros(F.grid())).norm == 0.0);
  Rng rng(4);
  const auto u = random_bump(F.grid(), rng);
  const auto phi = random_profile(F.grid(), rng);
  const auto res = F.residual(u);
  // <I'(u), phi> = int Delta G Delta phi.
  const auto lg = F.op().laplacian(res.rep.values);
  const auto lp = F.op().laplacian(phi.values);
  double form = 0.0;
  const auto sq = F.op().apply(phi.values);
  for (std::size_t i = 0; i < sq.size(); ++i) form += sq[i] * res.rep[static_cast<int>(i)];
  CHECK(form == doctest::Approx(F.pairing(u, phi)).epsilon(1e-8));
  CHECK(res.norm == doctest::Approx(std::sqrt(F.op().h2(res.rep.values))));
  CHECK(lg.size() == lp.size());
}

TEST_CASE("Nehari projection for mu > 0: one root, N-minus, on the manifold") {
  const Params p{6, 10.0, 0.8, 1.0};
  const Functional F(p, make_uniform(1.0, 512));
  const double pc = critical_exponent(p.N);
  const Rng root(77);
  for (int k = 0; k < 50; ++k) {
    Rng rng = root.split(k);
    const auto u = random_profile(F.grid(), rng);
    const auto rep = F.nehari_project(u);
    CHECK(rep.roots_found == 1);
    CHECK(rep.branch == Branch::kNminus);
    const auto v = F.project(u);
    const double gap = F.nehari_gap(v);
    CHECK(std::abs(gap) <= 1e-10 * (1.0 + F.op().h2(v.values)));
    const auto s = F.scalars(v);
    CHECK(rep.psi2_at_one_after == doctest::Approx(-2.0 * p.mu * s.l2 - (pc - 2.0) * s.crit).epsilon(1e-8));
  }
}

TEST_CASE("Nehari projection closed form when lambda = mu = 0") {
  const Params p{8, 0.0, 0.0, 1.0};
  const Functional F(p, make_uniform(1.0, 256));
  Rng rng(1);
  const auto u = random_bump(F.grid(), rng);
  const auto s = F.scalars(u);
  const double expected = std::pow(s.h2 / s.crit, (p.N - 4) / 8.0);
  CHECK(F.nehari_project(u).t_star == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(F.nehari_project(RadialFunction::zeros(F.grid())), InvalidArgument);
}

TEST_CASE("functional rejects functions that are not clamped") {
  const Functional F(Params{5, 0.0, 1.0, 1.0}, make_uniform(1.0, 64));
  auto u = RadialFunction::sample(F.grid(), [](double r) { return 2.0 - r; });
  CHECK_THROWS_AS(F.energy(u), InvalidArgument);
  CHECK_THROWS_AS(Functional(Params{5, 0.0, 1.0, 2.0}, make_uniform(1.0, 64)), InvalidArgument);
}

TEST_CASE("log-Sobolev and Poincare gaps over the corpus") {
  for (int N : {5, 8}) {
    auto grid = make_uniform(1.0, 1024);
    const double lt = first_eigen_laplace(*grid, N);
    const Rng root(42);
    for (int k = 0; k < 100; ++k) {
      Rng rng = root.split(k);
      const auto u = random_profile(grid, rng);
      for (double a : {0.5, 1.0, 2.0}) {
        CHECK(log_sobolev_gap(u, N, a, lt) >= -1e-10);
        CHECK(log_sobolev_gap(scaled(u, 7.5), N, a, lt) >= -1e-10);
      }
      CHECK(poincare_gap(u, N, lt) >= -1e-10);
    }
  }
}

TEST_CASE("log-Sobolev gap stays nonnegative for a Gaussian over a sweep of a") {
  const int N = 5;
  const double R = 12.0;
  auto grid = make_uniform(R, 4096);
  auto u = RadialFunction::sample(grid, [&](double r) {
    const double s = 1.0 - (r / R) * (r / R);
    return std::exp(-0.5 * r * r) * s * s;
  });
  const double lt = first_eigen_laplace(*grid, N);
  for (double a = 0.25; a <= 4.0; a += 0.05) CHECK(log_sobolev_gap(u, N, a, lt) >= -1e-10);
  CHECK_THROWS_AS(log_sobolev_gap(u, N, 0.0, lt), InvalidArgument);
}

TEST_CASE("elementary inequalities hold with equality at the calculus maxima") {
  const auto checks = elementary_inequalities();
  REQUIRE(checks.size() >= 6);
  for (const auto& c : checks) {
    CHECK_MESSAGE(c.holds, c.name);
    CHECK(c.max_excess <= 1e-12);
    if (c.expected_argmax > 0.0) CHECK(std::abs(c.argmax - c.expected_argmax) <= 1e-6 * c.expected_argmax);
  }
  CHECK(checks.front().expected_argmax == doctest::Approx(1.0 / std::numbers::e));
}
