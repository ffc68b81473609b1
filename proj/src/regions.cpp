#include "logplate/regions.hpp"

#include <cmath>
#include <limits>

#include "logplate/error.hpp"
#include "logplate/numerics.hpp"

namespace logplate {

namespace {

constexpr double kBoundaryBand = 1e-12;

struct Strict {
  bool holds;
  bool boundary;
};

// a + b > 0 with a relative dead band around zero.
Strict strictly_positive(double a, double b) {
  const double slack = a + b;
  const double scale = std::max(1.0, std::abs(a) + std::abs(b));
  if (std::abs(slack) <= kBoundaryBand * scale) return {false, true};
  return {slack > 0.0, false};
}

void check_consistent(const Params& p, const Constants& c) {
  validate(p);
  if (c.N != p.N || std::abs(c.R - p.R) > 1e-12 * p.R)
    throw InvalidArgument("Constants were computed for a different dimension or radius");
}

bool in_b_or_c(Region r) { return r == Region::kB || r == Region::kC || r == Region::kBandC; }

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::kA: return "A";
    case Region::kB: return "B";
    case Region::kC: return "C";
    case Region::kBandC: return "BandC";
    case Region::kNone: return "None";
  }
  return "?";
}

const char* to_string(ExistsHint e) {
  switch (e) {
    case ExistsHint::kYes: return "Yes";
    case ExistsHint::kNoPositive: return "NoPositive";
    case ExistsHint::kUnknown: return "Unknown";
  }
  return "?";
}

Verdict classify(const Params& p, const Constants& c) {
  check_consistent(p, c);
  Verdict v;
  v.details.emplace_back("mu", p.mu);
  if (p.mu > 0.0) {
    v.region = Region::kA;
    return v;
  }
  if (p.mu == 0.0) {
    v.notes.push_back("mu = 0 lies in none of the sets");
    return v;
  }
  const double N = p.N;
  bool in_b = false;
  if (p.lambda >= 0.0 && p.lambda < c.lambda1) {
    const double kappa = (c.lambda1 - p.lambda) / c.lambda1;
    const double first = 2.0 / N * std::pow(kappa, N / 4.0) * c.S_pow;
    const double second = 0.5 * p.mu * c.volume;
    const auto s = strictly_positive(first, second);
    v.details.emplace_back("B", first + second);
    if (s.boundary) v.notes.push_back("B inequality at boundary");
    in_b = s.holds;
  } else {
    v.details.emplace_back("B_lambda_range", p.lambda < 0.0 ? p.lambda : c.lambda1 - p.lambda);
  }
  const double first = 2.0 / N * c.S_pow;
  const double second = 0.5 * p.mu * std::exp(-p.lambda / p.mu) * c.volume;
  const auto s = strictly_positive(first, second);
  v.details.emplace_back("C", first + second);
  if (s.boundary) v.notes.push_back("C inequality at boundary");
  const bool in_c = s.holds;
  if (in_b && in_c) {
    v.region = Region::kBandC;
  } else if (in_b) {
    v.region = Region::kB;
  } else if (in_c) {
    v.region = Region::kC;
  }
  return v;
}

Verdict existence_verdict(const Params& p, const Constants& c) {
  Verdict v = classify(p, c);
  const int N = p.N;
  if (p.mu < 0.0) {
    const auto ne = nonexistence_check(p, c.lambda1);
    v.nonexistence = ne.fires;
    v.nonexist_value = ne.f_min;
    v.details.emplace_back("nonexistence_f_min", ne.f_min);
  }
  bool yes = false;
  if (N >= 8 && v.region == Region::kA) yes = true;
  if (N == 8 && p.mu < 0.0) {
    const double n8 = 25.0 * 1920.0 * std::exp(p.lambda / p.mu + 34.0 / 3.0) / std::pow(p.R, 4);
    v.n8_condition = n8;
    v.details.emplace_back("n8_condition_slack", 1.0 - n8);
    const auto s = strictly_positive(1.0, -n8);
    if (s.boundary) v.notes.push_back("N = 8 condition at boundary");
    if (in_b_or_c(v.region) && s.holds) yes = true;
  }
  if (N == 8 && p.mu > 0.0) {
    // Radius condition used inside the N = 8 argument for mu > 0, at rho = R/2.
    const double rho = 0.5 * p.R;
    v.details.emplace_back("n8_mu_positive_rho_half_R",
                           384.0 * std::exp(p.lambda / p.mu - 50.0 / 3.0) / (125.0 * std::pow(rho, 4)));
  }
  if (N >= 5 && N <= 7 && in_b_or_c(v.region)) yes = true;
  if (yes) {
    v.exists_hint = ExistsHint::kYes;
    if (v.nonexistence) v.notes.push_back("existence and nonexistence both fired");
  } else if (v.nonexistence) {
    v.exists_hint = ExistsHint::kNoPositive;
  }
  return v;
}

double nonexistence_f(const Params& p, double lambda1, double t) {
  const double pc = critical_exponent(p.N);
  return p.lambda - lambda1 + p.mu * std::log(t * t) + std::pow(t, pc - 2.0);
}

Nonexistence nonexistence_check(const Params& p, double lambda1) {
  validate(p);
  Nonexistence out;
  if (!(p.mu < 0.0)) {
    out.f_min = std::numeric_limits<double>::quiet_NaN();
    out.t_tilde = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double kappa = -p.mu * (p.N - 4) / 4.0;
  out.t_tilde = std::pow(kappa, (p.N - 4) / 8.0);
  out.f_min = kappa - kappa * std::log(kappa) + p.lambda - lambda1;
  out.fires = out.f_min >= 0.0;
  return out;
}

double nonexistence_grid_min(const Params& p, double lambda1, int points) {
  const double x0 = std::log(1e-6);
  const double x1 = std::log(1e6);
  auto f = [&](double x) { return nonexistence_f(p, lambda1, std::exp(x)); };
  double best = std::numeric_limits<double>::infinity();
  int kbest = 0;
  for (int k = 0; k < points; ++k) {
    const double v = f(x0 + (x1 - x0) * k / (points - 1));
    if (v < best) {
      best = v;
      kbest = k;
    }
  }
  const double dx = (x1 - x0) / (points - 1);
  const double xk = x0 + dx * kbest;
  const auto ext = golden_max([&](double x) { return -f(x); }, std::max(x0, xk - dx), std::min(x1, xk + dx), 1e-15);
  return std::min(best, -ext.value);
}

double geometry_g(const Params& p, const Constants& c, GeometryCase which, double t) {
  const double pc = c.p_crit;
  const double S = std::pow(c.S_pow, 4.0 / p.N);
  const double kappa = which == GeometryCase::kB ? (c.lambda1 - p.lambda) / c.lambda1 : 1.0;
  const double shift = which == GeometryCase::kB ? 0.5 * p.mu * c.volume
                                                 : 0.5 * p.mu * std::exp(-p.lambda / p.mu) * c.volume;
  return 0.5 * kappa * t * t - std::pow(S, -0.5 * pc) * std::pow(t, pc) / pc + shift;
}

Geometry mp_geometry(const Params& p, const Constants& c) {
  const Verdict v = classify(p, c);
  const double N = p.N;
  Geometry g;
  if (v.region == Region::kB || v.region == Region::kBandC) {
    const double kappa = (c.lambda1 - p.lambda) / c.lambda1;
    g.which = GeometryCase::kB;
    g.r = std::pow(kappa, (N - 4) / 8.0) * std::sqrt(c.S_pow);
    g.beta = 2.0 / N * std::pow(kappa, N / 4.0) * c.S_pow + 0.5 * p.mu * c.volume;
  } else if (v.region == Region::kC) {
    g.which = GeometryCase::kC;
    g.r = std::sqrt(c.S_pow);
    g.beta = 2.0 / N * c.S_pow + 0.5 * p.mu * std::exp(-p.lambda / p.mu) * c.volume;
  } else {
    throw InvalidArgument("mp_geometry: parameters lie outside B and C");
  }
  return g;
}

ThresholdReport threshold_report(const Params& p, const Constants& c, std::optional<double> energy) {
  check_consistent(p, c);
  ThresholdReport r;
  r.cS = threshold_cS(c.S_pow, p.N);
  if (energy) r.slack = r.cS - *energy;
  return r;
}

}  // namespace logplate
