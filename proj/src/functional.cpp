#include "logplate/functional.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "logplate/error.hpp"
#include "logplate/numerics.hpp"

namespace logplate {

namespace {

// x ln x^2 and x^2 ln x^2, continuous at 0.
double xlogx2(double x) { return x == 0.0 ? 0.0 : 2.0 * x * std::log(std::abs(x)); }
double x2logx2(double x) { return x == 0.0 ? 0.0 : 2.0 * x * x * std::log(std::abs(x)); }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string(what) + ": non-finite value");
}

constexpr double kScanLo = 1e-6;
constexpr double kScanHi = 1e6;
constexpr int kScanPoints = 2001;

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::kNplus: return "Nplus";
    case Branch::kNzero: return "Nzero";
    case Branch::kNminus: return "Nminus";
  }
  return "?";
}

double fibering(const FiberScalars& s, const Params& p, double t) {
  if (!(t > 0.0)) throw InvalidArgument("fibering: t must be positive");
  const double pc = critical_exponent(p.N);
  const double t2 = t * t;
  const double lt2 = std::log(t2);
  return 0.5 * t2 * s.h2 - 0.5 * p.lambda * t2 * s.l2 + 0.5 * p.mu * t2 * s.l2 -
         0.5 * p.mu * t2 * (s.logmom + lt2 * s.l2) - std::pow(t, pc) * s.crit / pc;
}

std::pair<double, double> fibering_derivs(const FiberScalars& s, const Params& p, double t) {
  if (!(t > 0.0)) throw InvalidArgument("fibering_derivs: t must be positive");
  const double pc = critical_exponent(p.N);
  const double lt2 = std::log(t * t);
  const double tp2 = std::pow(t, pc - 2.0);
  const double base = s.h2 - p.lambda * s.l2 - p.mu * s.logmom - p.mu * s.l2 * lt2;
  const double d1 = t * (base - tp2 * s.crit);
  const double d2 = base - 2.0 * p.mu * s.l2 - (pc - 1.0) * tp2 * s.crit;
  return {d1, d2};
}

FiberingReport nehari_project(const FiberScalars& s, const Params& p) {
  if (!(s.l2 > 0.0)) throw InvalidArgument("nehari_project: u must be nonzero");
  const double pc = critical_exponent(p.N);
  // psi_u'(t) / t as a function of x = ln t.
  auto phi = [&](double x) {
    return s.h2 - p.lambda * s.l2 - p.mu * s.logmom - 2.0 * p.mu * s.l2 * x -
           std::exp((pc - 2.0) * x) * s.crit;
  };
  auto scale = [&](double x) {
    return std::abs(s.h2) + std::abs(p.lambda * s.l2) + std::abs(p.mu * s.logmom) +
           std::abs(2.0 * p.mu * s.l2 * x) + std::exp((pc - 2.0) * x) * s.crit;
  };
  const double x0 = std::log(kScanLo);
  const double x1 = std::log(kScanHi);
  FiberingReport rep;
  int bracket = -1;
  double prev = phi(x0);
  std::vector<double> xs(kScanPoints), fs(kScanPoints);
  for (int k = 0; k < kScanPoints; ++k) {
    xs[k] = x0 + (x1 - x0) * k / (kScanPoints - 1);
    fs[k] = phi(xs[k]);
    if (k > 0) {
      if ((fs[k] > 0) != (prev > 0)) ++rep.roots_found;
      if (prev > 0 && fs[k] <= 0) bracket = k - 1;
    }
    prev = fs[k];
  }
  if (bracket < 0) throw NumericalError("nehari_project: psi' has no sign change on [1e-6, 1e6]");
  const double xa = xs[bracket];
  const double xb = xs[bracket + 1];
  const double x = bracketed_root(phi, xa, xb, fs[bracket], fs[bracket + 1], 1e-16,
                                  1e-14 * scale(0.5 * (xa + xb)));
  const double t = std::exp(x);
  rep.t_star = t;
  rep.psi1 = t * phi(x);
  const double t2 = t * t;
  FiberScalars v{t2 * s.h2, t2 * s.l2, t2 * (s.logmom + std::log(t2) * s.l2), std::pow(t, pc) * s.crit};
  rep.psi2_at_one_after = fibering_derivs(v, p, 1.0).second;
  const double band = 1e-10 * (std::abs(v.h2) + std::abs(p.lambda * v.l2) + 2.0 * std::abs(p.mu) * v.l2 +
                               std::abs(p.mu * v.logmom) + (pc - 1.0) * v.crit);
  if (std::abs(rep.psi2_at_one_after) <= band) {
    rep.branch = Branch::kNzero;
  } else {
    rep.branch = rep.psi2_at_one_after < 0 ? Branch::kNminus : Branch::kNplus;
  }
  return rep;
}

Functional::Functional(Params p, GridPtr grid) : p_(p), op_(std::move(grid), p.N), pc_(critical_exponent(p.N)) {
  validate(p_);
  if (std::abs(op_.grid()->R() - p_.R) > 1e-12 * p_.R)
    throw InvalidArgument("Functional: grid radius differs from Params.R");
}

void Functional::check(const RadialFunction& u) const {
  if (u.grid != op_.grid() && (u.grid->size() != op_.nodes() || u.grid->R() != op_.grid()->R()))
    throw InvalidArgument("Functional: function lives on a different grid");
  if (u.size() != op_.nodes()) throw InvalidArgument("Functional: length mismatch");
  if (!op_.is_clamped(u.values))
    throw InvalidArgument("Functional: u must satisfy the discrete clamp (see enforce_clamp)");
}

FiberScalars Functional::scalars(const RadialFunction& u) const {
  check(u);
  const auto w = op_.weights();
  FiberScalars s;
  s.h2 = op_.h2(u.values);
  for (int i = 0; i + 1 < u.size(); ++i) {
    const double x = u.values[i];
    s.l2 += w[i] * x * x;
    s.logmom += w[i] * x2logx2(x);
    s.crit += w[i] * std::pow(std::abs(x), pc_);
  }
  require_finite(s.h2 + s.l2 + s.logmom + s.crit, "scalars");
  return s;
}

double Functional::energy(const RadialFunction& u) const {
  const auto s = scalars(u);
  const double e = 0.5 * s.h2 - 0.5 * p_.lambda * s.l2 + 0.5 * p_.mu * s.l2 - 0.5 * p_.mu * s.logmom -
                   s.crit / pc_;
  require_finite(e, "energy");
  return e;
}

std::vector<double> Functional::nonlinearity(const RadialFunction& u) const {
  check(u);
  std::vector<double> f(u.size(), 0.0);
  for (int i = 0; i + 1 < u.size(); ++i) {
    const double x = u.values[i];
    f[i] = p_.lambda * x + p_.mu * xlogx2(x) + std::pow(std::abs(x), pc_ - 2.0) * x;
  }
  return f;
}

std::vector<double> Functional::gradient(const RadialFunction& u) const {
  const auto f = nonlinearity(u);
  auto g = op_.apply(u.values);
  const auto b = op_.load(f);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= b[i];
  return g;
}

double Functional::pairing(const RadialFunction& u, const RadialFunction& phi) const {
  check(phi);
  const auto g = gradient(u);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * phi.values[i];
  return s;
}

Residual Functional::residual(const RadialFunction& u) const {
  auto G = op_.solve(gradient(u));
  const double norm = std::sqrt(op_.h2(G));
  require_finite(norm, "residual");
  return {RadialFunction(u.grid, std::move(G)), norm};
}

double Functional::nehari_gap(const RadialFunction& u) const { return pairing(u, u); }

double Functional::energy_difference(const RadialFunction& u, const RadialFunction& v) const {
  check(u);
  check(v);
  const int n = u.size();
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = v.values[i] - u.values[i];
  const auto lu = op_.laplacian(u.values);
  const auto ld = op_.laplacian(d);
  const auto ws = op_.trapezoid_weights();
  const auto w = op_.weights();
  double quad = 0.0;
  for (int i = 0; i < n; ++i) quad += ws[i] * ld[i] * (lu[i] + 0.5 * ld[i]);
  double nonlin = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) continue;
    const double a = u.values[i];
    const double di = d[i];
    auto f = [&](double th) {
      const double x = a + th * di;
      return p_.lambda * x + p_.mu * xlogx2(x) + std::pow(std::abs(x), pc_ - 2.0) * x;
    };
    nonlin += w[i] * di * boost::math::quadrature::gauss<double, 10>::integrate(f, 0.0, 1.0);
  }
  const double diff = quad - nonlin;
  require_finite(diff, "energy_difference");
  return diff;
}

double Functional::fibering(const RadialFunction& u, double t) const {
  return logplate::fibering(scalars(u), p_, t);
}

std::pair<double, double> Functional::fibering_derivs(const RadialFunction& u, double t) const {
  return logplate::fibering_derivs(scalars(u), p_, t);
}

FiberingReport Functional::nehari_project(const RadialFunction& u) const {
  return logplate::nehari_project(scalars(u), p_);
}

RadialFunction Functional::project(const RadialFunction& u) const {
  const auto rep = nehari_project(u);
  RadialFunction v = u;
  for (double& x : v.values) x *= rep.t_star;
  return v;
}

double energy(const RadialFunction& u, const Params& p) {
  return Functional(p, u.grid).energy(u);
}

Residual residual(const RadialFunction& u, const Params& p) { return Functional(p, u.grid).residual(u); }

double fibering(const RadialFunction& u, const Params& p, double t) {
  return Functional(p, u.grid).fibering(u, t);
}

std::pair<double, double> fibering_derivs(const RadialFunction& u, const Params& p, double t) {
  return Functional(p, u.grid).fibering_derivs(u, t);
}

FiberingReport nehari_project(const RadialFunction& u, const Params& p) {
  return Functional(p, u.grid).nehari_project(u);
}

double log_sobolev_gap(const RadialFunction& u, int N, double a, double lambda1_lap) {
  if (!(a > 0.0)) throw InvalidArgument("log_sobolev_gap: a must be positive");
  if (!(lambda1_lap > 0.0)) throw InvalidArgument("log_sobolev_gap: eigenvalue must be positive");
  const double h2 = std::pow(h2_norm(u, N), 2);
  RadialFunction sq = u;
  RadialFunction lg = u;
  for (int i = 0; i < u.size(); ++i) {
    sq.values[i] = u.values[i] * u.values[i];
    lg.values[i] = x2logx2(u.values[i]);
  }
  const double l2 = quad_ball(sq, N);
  if (!(l2 > 0.0)) throw InvalidArgument("log_sobolev_gap: u must be nonzero");
  const double logmom = quad_ball(lg, N);
  const double rhs = a * a / (std::numbers::pi * lambda1_lap) * h2 + (std::log(l2) - N * (1.0 + std::log(a))) * l2;
  return rhs - logmom;
}

double poincare_gap(const RadialFunction& u, int N, double lambda1_lap) {
  if (!(lambda1_lap > 0.0)) throw InvalidArgument("poincare_gap: eigenvalue must be positive");
  return std::pow(h2_norm(u, N), 2) / lambda1_lap - dirichlet_energy(u, N);
}

namespace {

// Scans lhs - rhs over t = exp(x) on a uniform x grid and refines the
// location of the maximum of lhs.
InequalityCheck sweep(std::string name, double x_lo, double x_hi, int points,
                      const std::function<double(double)>& lhs, const std::function<double(double)>& rhs,
                      double expected) {
  InequalityCheck c;
  c.name = std::move(name);
  c.expected_argmax = expected;
  c.max_excess = -std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  int kbest = 0;
  double worst_scale = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = std::exp(x_lo + (x_hi - x_lo) * k / (points - 1));
    const double l = lhs(t);
    const double r = rhs(t);
    if (l - r > c.max_excess) {
      c.max_excess = l - r;
      worst_scale = std::abs(r);
    }
    if (l > best) {
      best = l;
      kbest = k;
    }
  }
  const double dx = (x_hi - x_lo) / (points - 1);
  const double xk = x_lo + dx * kbest;
  const auto ext = golden_max([&](double x) { return lhs(std::exp(x)); }, std::max(x_lo, xk - dx),
                              std::min(x_hi, xk + dx), 1e-15);
  c.argmax = std::exp(ext.x);
  c.holds = c.max_excess <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, worst_scale);
  return c;
}

}  // namespace

std::vector<InequalityCheck> elementary_inequalities(int points) {
  if (points < 1000) throw InvalidArgument("elementary_inequalities: grid too small");
  const double e = std::numbers::e;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double lo = std::log(1e-6);
  const double hi = std::log(1e6);
  std::vector<InequalityCheck> out;
  out.push_back(sweep(
      "|t ln t| <= 1/e", std::log(1e-12), 0.0, points, [](double t) { return std::abs(t * std::log(t)); },
      [&](double) { return 1.0 / e; }, 1.0 / e));
  for (double s : {0.25, 0.5, 1.0, 2.0}) {
    out.push_back(sweep(
        "ln t / t^" + std::to_string(s) + " <= 1/(s e)", lo, hi, points,
        [s](double t) { return std::log(t) / std::pow(t, s); }, [&, s](double) { return 1.0 / (s * e); },
        std::exp(1.0 / s)));
  }
  for (double a : {0.25, 0.5, 1.0, 2.0}) {
    for (double d : {0.25, 0.5, 1.0, 2.0}) {
      const double C = 1.0 / (e * std::min(a, d));
      auto chk = sweep(
          "|ln t| <= C (t^" + std::to_string(a) + " + t^-" + std::to_string(d) + ")", lo, hi, points,
          [](double t) { return std::abs(std::log(t)); },
          [=](double t) { return C * (std::pow(t, a) + std::pow(t, -d)); }, nan);
      chk.argmax = nan;
      out.push_back(std::move(chk));
    }
  }
  for (const auto& c : out)
    if (!c.holds) throw NumericalError("elementary_inequalities: violated: " + c.name);
  return out;
}

}  // namespace logplate
