#include "logplate/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logplate/corpus.hpp"
#include "logplate/numerics.hpp"
#include "logplate/rng.hpp"

namespace logplate {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;
// Below this max-point residual the mountain pass finishes on the Nehari manifold.
constexpr double kPolishResidual = 1e-3;

RadialFunction axpy_abs(const RadialFunction& u, double s, const RadialFunction& g) {
  RadialFunction v = u;
  for (int i = 0; i < v.size(); ++i) v.values[i] = std::abs(u.values[i] - s * g.values[i]);
  enforce_clamp(v);
  return v;
}

Solution finish(const Functional& F, RadialFunction u, int iterations, std::vector<double> history,
                std::string reason, double tol) {
  Solution sol;
  const auto res = F.residual(u);
  sol.energy = F.energy(u);
  sol.residual_norm = res.norm;
  sol.nehari_gap = F.nehari_gap(u);
  const double h2 = F.op().h2(u.values);
  sol.converged = res.norm < tol && std::abs(sol.nehari_gap) <= tol * (1.0 + h2);
  sol.iterations = iterations;
  sol.energy_history = std::move(history);
  sol.stop_reason = std::move(reason);
  sol.u = std::move(u);
  return sol;
}

struct Step {
  RadialFunction v;
  double decrease;  // I(v) - I(u), negative
  bool accepted;
};

// Armijo backtracking from u along -G, with an optional map applied to the
// trial point (Nehari projection for the constrained descent).
template <class Map>
Step armijo(const Functional& F, const RadialFunction& u, const Residual& res, Map&& map) {
  double s = 1.0;
  const double slope = res.norm * res.norm;
  for (int k = 0; k < kMaxHalvings; ++k, s *= 0.5) {
    RadialFunction v = map(axpy_abs(u, s, res.rep));
    const double d = F.energy_difference(u, v);
    if (d <= -kArmijo * s * slope) return {std::move(v), d, true};
  }
  return {u, 0.0, false};
}

double h2_distance(const Functional& F, const RadialFunction& a, const RadialFunction& b) {
  std::vector<double> d(a.size());
  for (int i = 0; i < a.size(); ++i) d[i] = a.values[i] - b.values[i];
  return std::sqrt(F.op().h2(d));
}

// Re-spaces path[lo..hi] uniformly in H_0^2 arclength, endpoints fixed.
void redistribute(const Functional& F, std::vector<RadialFunction>& path, int lo, int hi) {
  if (hi - lo < 2) return;
  std::vector<double> arc(hi - lo + 1, 0.0);
  for (int j = lo + 1; j <= hi; ++j) arc[j - lo] = arc[j - lo - 1] + h2_distance(F, path[j], path[j - 1]);
  const double total = arc.back();
  if (!(total > 0.0)) return;
  std::vector<RadialFunction> fresh(path.begin() + lo, path.begin() + hi + 1);
  int seg = 0;
  for (int j = lo + 1; j < hi; ++j) {
    const double target = total * (j - lo) / (hi - lo);
    while (seg + 1 < hi - lo && arc[seg + 1] < target) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double w = len > 0.0 ? (target - arc[seg]) / len : 0.0;
    const auto& a = path[lo + seg];
    const auto& b = path[lo + seg + 1];
    RadialFunction p = a;
    for (int i = 0; i < p.size(); ++i) p.values[i] = (1.0 - w) * a.values[i] + w * b.values[i];
    enforce_clamp(p);
    fresh[j - lo] = std::move(p);
  }
  for (int j = lo + 1; j < hi; ++j) path[j] = std::move(fresh[j - lo]);
}

// Steepest descent with Nehari projection from u; iteration numbers continue
// from it0 so the mountain-pass polish reports a single count.
Solution descend_on_nehari(const Functional& F, RadialFunction u, double tol, int it0, int max_iter,
                           std::vector<double> history, const char* who) {
  auto project = [&](RadialFunction v) { return F.project(v); };
  for (int it = it0; it < max_iter; ++it) {
    const auto res = F.residual(u);
    if (res.norm < tol) return finish(F, std::move(u), it, std::move(history), "residual below tolerance", tol);
    auto step = armijo(F, u, res, project);
    if (!step.accepted) {
      auto sol = finish(F, std::move(u), it, std::move(history), "line search failed", tol);
      throw NonConvergence(std::string(who) + ": line search failed at residual " +
                               std::to_string(sol.residual_norm),
                           std::move(sol));
    }
    if (!(step.decrease < 0.0))
      throw NumericalError(std::string(who) + ": accepted step did not lower the energy");
    u = std::move(step.v);
    history.push_back(F.energy(u));
  }
  auto sol = finish(F, std::move(u), max_iter, std::move(history), "iteration cap", tol);
  if (sol.converged) return sol;
  throw NonConvergence(std::string(who) + ": iteration cap reached at residual " + std::to_string(sol.residual_norm),
                       std::move(sol));
}

}  // namespace

Solution nehari_descent(const Params& p, std::uint64_t seed, double tol, const SolverOptions& opt) {
  validate(p);
  if (!(p.mu > 0.0)) throw InvalidArgument("nehari_descent: requires mu > 0");
  if (!(tol > 0.0)) throw InvalidArgument("nehari_descent: tolerance must be positive");
  const Functional F(p, make_uniform(p.R, opt.grid_size));
  Rng rng(seed);
  RadialFunction u = F.project(random_bump(F.grid(), rng));
  std::vector<double> history{F.energy(u)};
  return descend_on_nehari(F, std::move(u), tol, 0, opt.max_iter, std::move(history), "nehari_descent");
}

RadialFunction mp_endpoint(const Functional& F, std::uint64_t seed) {
  Rng rng(seed);
  const RadialFunction bump = random_bump(F.grid(), rng);
  const auto s = F.scalars(bump);
  double T = 2.0;
  try {
    T = 2.0 * nehari_project(s, F.params()).t_star;
  } catch (const NumericalError&) {
  }
  for (int k = 0; k < 200; ++k, T *= 2.0) {
    if (fibering(s, F.params(), T) < 0.0) {
      RadialFunction e = bump;
      for (double& x : e.values) x *= T;
      return e;
    }
  }
  throw NumericalError("mp_endpoint: could not reach negative energy");
}

Solution mountain_pass(const Params& p, std::uint64_t seed, double tol, const SolverOptions& opt) {
  validate(p);
  if (!(tol > 0.0)) throw InvalidArgument("mountain_pass: tolerance must be positive");
  const int K = opt.path_points;
  if (K < 5) throw InvalidArgument("mountain_pass: need at least 5 path points");
  const Functional F(p, make_uniform(p.R, opt.grid_size));
  const RadialFunction e = mp_endpoint(F, seed);
  std::vector<RadialFunction> path(K, e);
  for (int k = 0; k < K; ++k)
    for (double& x : path[k].values) x *= static_cast<double>(k) / (K - 1);
  std::vector<double> energies(K);
  std::vector<double> history;
  auto identity = [](RadialFunction v) { return v; };
  for (int it = 0; it < opt.max_iter; ++it) {
    for (int k = 0; k < K; ++k) energies[k] = F.energy(path[k]);
    const int km = static_cast<int>(std::max_element(energies.begin(), energies.end()) - energies.begin());
    if (km == 0 || km == K - 1) throw NumericalError("mountain_pass: path collapsed, maximum at an endpoint");
    // Refine the maximum along the parabola through the three nodes around it.
    const auto& a = path[km - 1];
    const auto& b = path[km];
    const auto& c = path[km + 1];
    auto curve = [&](double tau) {
      RadialFunction v = b;
      for (int i = 0; i < v.size(); ++i) {
        const double d1 = 0.5 * (c.values[i] - a.values[i]);
        const double d2 = 0.5 * (c.values[i] - 2.0 * b.values[i] + a.values[i]);
        v.values[i] = std::abs(b.values[i] + tau * d1 + tau * tau * d2);
      }
      enforce_clamp(v);
      return v;
    };
    const auto ext = golden_max([&](double tau) { return F.energy(curve(tau)); }, -1.0, 1.0, 1e-10);
    if (ext.value > energies[km]) path[km] = curve(ext.x);
    history.push_back(F.energy(path[km]));
    const auto res = F.residual(path[km]);
    if (res.norm < tol) return finish(F, path[km], it, std::move(history), "residual below tolerance", tol);
    if (res.norm < kPolishResidual) {
      const auto rep = F.nehari_project(path[km]);
      if (rep.branch == Branch::kNminus && rep.roots_found <= 2)
        return descend_on_nehari(F, F.project(path[km]), tol, it, opt.max_iter, std::move(history),
                                 "mountain_pass");
    }
    auto step = armijo(F, path[km], res, identity);
    if (!step.accepted) {
      auto sol = finish(F, path[km], it, std::move(history), "line search failed", tol);
      throw NonConvergence("mountain_pass: line search failed at residual " + std::to_string(sol.residual_norm),
                           std::move(sol));
    }
    path[km] = std::move(step.v);
    redistribute(F, path, 0, km);
    redistribute(F, path, km, K - 1);
  }
  for (int k = 0; k < K; ++k) energies[k] = F.energy(path[k]);
  const int km = static_cast<int>(std::max_element(energies.begin(), energies.end()) - energies.begin());
  auto sol = finish(F, path[km], opt.max_iter, std::move(history), "iteration cap", tol);
  if (sol.converged) return sol;
  throw NonConvergence("mountain_pass: iteration cap reached at residual " + std::to_string(sol.residual_norm),
                       std::move(sol));
}

Certificate certify(const Solution& sol, const Params& p, const Constants& c) {
  if (!sol.converged) throw InvalidArgument("certify: solution did not converge");
  if (!sol.u.grid) throw InvalidArgument("certify: solution has no grid");
  const Functional F(p, sol.u.grid);
  if (!(std::sqrt(F.op().h2(sol.u.values)) > 1e-12)) throw InvalidArgument("certify: trivial solution");
  Certificate cert;
  const auto fine = std::make_shared<const RadialGrid>(sol.u.grid->refined());
  cert.fine_grid_size = fine->size();
  RadialFunction uf = interpolate(sol.u, fine);
  enforce_clamp(uf);
  const Functional Ff(p, fine);
  cert.energy_fine = Ff.energy(uf);
  cert.residual_fine = Ff.residual(uf).norm;
  cert.drift = std::abs(cert.energy_fine - sol.energy) / std::abs(sol.energy);
  const auto rep = F.nehari_project(sol.u);
  cert.branch = rep.branch;
  cert.t_star = rep.t_star;
  for (double v : sol.u.values)
    if (v < 0.0) ++cert.positivity_violations;
  cert.cS_slack = c.cS - sol.energy;
  cert.grid_polluted = !(cert.drift < 1e-3);
  return cert;
}

}  // namespace logplate
