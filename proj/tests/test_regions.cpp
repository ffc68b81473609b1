#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "logplate/constants.hpp"
#include "logplate/error.hpp"
#include "logplate/regions.hpp"
#include "logplate/rng.hpp"

using namespace logplate;

namespace {

Constants consts(int N, double R = 1.0) { return make_constants(Params{N, 0.0, 1.0, R}, 1024); }

}  // namespace

TEST_CASE("classification examples") {
  const auto c9 = consts(9);
  const auto v9 = existence_verdict(Params{9, 0.0, 1.0, 1.0}, c9);
  CHECK(v9.region == Region::kA);
  CHECK(v9.exists_hint == ExistsHint::kYes);
  CHECK_FALSE(v9.nonexistence);

  const auto c5 = consts(5);
  CHECK(classify(Params{5, 0.0, 1.0, 1.0}, c5).region == Region::kA);
  CHECK(existence_verdict(Params{5, 0.0, 1.0, 1.0}, c5).exists_hint == ExistsHint::kUnknown);
  CHECK(classify(Params{5, 600.0, 0.0, 1.0}, c5).region == Region::kNone);

  const auto vb = existence_verdict(Params{5, 600.0, -1.0, 1.0}, c5);
  CHECK((vb.region == Region::kB || vb.region == Region::kBandC));
  CHECK(vb.exists_hint == ExistsHint::kYes);

  const auto c6 = consts(6);
  const auto vc = existence_verdict(Params{6, -2000.0, -1000.0, 1.0}, c6);
  CHECK(vc.region == Region::kC);
  CHECK(vc.exists_hint == ExistsHint::kYes);

  // Above lambda1 with a small negative mu only the nonexistence bound fires.
  const auto vn = existence_verdict(Params{5, c5.lambda1 + 10.0, -1.0, 1.0}, c5);
  CHECK(vn.region == Region::kNone);
  CHECK(vn.nonexistence);
  CHECK(vn.exists_hint == ExistsHint::kNoPositive);
}

TEST_CASE("B requires lambda in [0, lambda1)") {
  const auto c = consts(6);
  const auto v = classify(Params{6, c.lambda1 + 1.0, -1e-3, 1.0}, c);
  CHECK(v.region != Region::kB);
  CHECK(v.region != Region::kBandC);
  const auto w = classify(Params{6, -1.0, -1e-3, 1.0}, c);
  CHECK(w.region != Region::kB);
}

TEST_CASE("classification rejects mismatched constants") {
  const auto c = consts(6);
  CHECK_THROWS_AS(classify(Params{7, 0.0, 1.0, 1.0}, c), InvalidArgument);
  CHECK_THROWS_AS(classify(Params{6, 0.0, 1.0, 2.0}, c), InvalidArgument);
}

TEST_CASE("closed-form minimum of f agrees with a brute-force grid over 100 random triples") {
  Rng rng(31337);
  for (int k = 0; k < 100; ++k) {
    const int N = 5 + static_cast<int>(rng.uniform() * 8.0);
    const double lambda = rng.uniform(-1000.0, 1000.0);
    const double mu = -std::pow(10.0, rng.uniform(-3.0, 2.0));
    const double lambda1 = rng.uniform(10.0, 2000.0);
    const Params p{N, lambda, mu, 1.0};
    const auto ne = nonexistence_check(p, lambda1);
    const double grid = nonexistence_grid_min(p, lambda1);
    CHECK(std::abs(ne.f_min - grid) <= 1e-8 * std::max(1.0, std::abs(grid)));
    CHECK(nonexistence_f(p, lambda1, ne.t_tilde) == doctest::Approx(ne.f_min).epsilon(1e-12));
    CHECK(ne.fires == (ne.f_min >= 0.0));
  }
  const auto pos = nonexistence_check(Params{5, 0.0, 1.0, 1.0}, 100.0);
  CHECK_FALSE(pos.fires);
  CHECK(std::isnan(pos.f_min));
}

TEST_CASE("existence and nonexistence never fire together on a 50 x 50 sweep") {
  for (int N : {5, 8}) {
    const auto c = consts(N);
    int yes = 0;
    int no = 0;
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) {
        const double lambda = -2.0 * c.lambda1 + 4.0 * c.lambda1 * i / 49.0;
        const double mu = -200.0 + 400.0 * j / 49.0;
        const auto v = existence_verdict(Params{N, lambda, mu, 1.0}, c);
        CHECK_FALSE((v.exists_hint == ExistsHint::kYes && v.nonexistence));
        yes += v.exists_hint == ExistsHint::kYes;
        no += v.nonexistence;
      }
    }
    CHECK(yes > 0);
    CHECK(no > 0);
  }
}

TEST_CASE("N = 8 condition: closed form and its effect on existence") {
  const auto c = consts(8);
  const Params p{8, 100.0, -1.0, 1.0};
  const auto v = existence_verdict(p, c);
  REQUIRE(v.n8_condition.has_value());
  CHECK(*v.n8_condition == doctest::Approx(25.0 * 1920.0 * std::exp(-100.0 + 34.0 / 3.0)));
  CHECK(*v.n8_condition < 1.0);
  CHECK(v.exists_hint == ExistsHint::kYes);
  // lambda / mu close to zero makes the condition fail.
  const auto w = existence_verdict(Params{8, 1e-3, -1.0, 1.0}, c);
  REQUIRE(w.n8_condition.has_value());
  CHECK(*w.n8_condition > 1.0);
  CHECK(w.exists_hint != ExistsHint::kYes);
  CHECK_FALSE(existence_verdict(Params{9, 100.0, -1.0, 1.0}, consts(9)).n8_condition.has_value());
}

TEST_CASE("mountain pass geometry: the sphere radius maximises g and g equals beta there") {
  struct Case {
    int N;
    double lambda;
    double mu;
    GeometryCase which;
  };
  for (const auto& k : {Case{5, 600.0, -1.0, GeometryCase::kB}, Case{6, -2000.0, -1000.0, GeometryCase::kC},
                        Case{7, 0.0, -0.5, GeometryCase::kB}}) {
    const auto c = consts(k.N);
    const Params p{k.N, k.lambda, k.mu, 1.0};
    const auto g = mp_geometry(p, c);
    CHECK(g.which == k.which);
    CHECK(g.beta > 0.0);
    CHECK(geometry_g(p, c, g.which, g.r) == doctest::Approx(g.beta).epsilon(1e-12));
    CHECK(geometry_g(p, c, g.which, 0.99 * g.r) < g.beta);
    CHECK(geometry_g(p, c, g.which, 1.01 * g.r) < g.beta);
  }
  const auto c = consts(5);
  CHECK_THROWS_AS(mp_geometry(Params{5, 0.0, 1.0, 1.0}, c), InvalidArgument);
}

TEST_CASE("threshold report") {
  const auto c = consts(5);
  const Params p{5, 0.0, 1.0, 1.0};
  const auto r0 = threshold_report(p, c);
  CHECK(r0.cS == doctest::Approx(0.4 * sobolev_pow(5)));
  CHECK_FALSE(r0.slack.has_value());
  const auto r1 = threshold_report(p, c, 70.0);
  REQUIRE(r1.slack.has_value());
  CHECK(*r1.slack == doctest::Approx(r0.cS - 70.0));
}
