#include "logplate/talenti.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "logplate/error.hpp"
#include "logplate/numerics.hpp"

namespace logplate {

namespace {

// h(t) = exp(-1/t) and its first two derivatives; zero below the underflow
// threshold so the products stay finite.
struct Smooth {
  double h, d1, d2;
};
Smooth smooth_step(double t) {
  if (t <= 1.0 / 700.0) return {0.0, 0.0, 0.0};
  const double h = std::exp(-1.0 / t);
  const double t2 = t * t;
  return {h, h / t2, h * (1.0 / (t2 * t2) - 2.0 / (t2 * t))};
}

double x2logx2(double x) { return x == 0.0 ? 0.0 : 2.0 * x * x * std::log(std::abs(x)); }

constexpr double kCoreWidth = 0.5;
constexpr int kBridgePanels = 16;
constexpr int kTailPanels = 8;

struct Pieces {
  double core_h2 = 0, core_l2 = 0, core_crit = 0, core_log = 0;
  double bridge_h2 = 0, bridge_l2 = 0, bridge_crit = 0, bridge_log = 0;
  double bridge_h2_loss = 0, bridge_crit_loss = 0;  // phi-induced changes
  double tail_h2 = 0, tail_crit = 0;
};

Pieces integrate_pieces(const TalentiSpec& spec, int level) {
  const int N = spec.N;
  const double eps = spec.eps;
  const double rho = spec.rho;
  const double omega = sphere_area(N);
  const double pc = critical_exponent(N);
  Pieces out;

  // Core, r = eps sinh(s): phi = 1.
  const double s_rho = std::asinh(rho / eps);
  const int core_panels = level * std::max(4, static_cast<int>(std::ceil(s_rho / kCoreWidth)));
  auto core = [&](auto&& g) {
    return gauss_panels(
        [&](double s) {
          const double r = eps * std::sinh(s);
          const double jac = omega * std::pow(r, N - 1) * eps * std::cosh(s);
          return g(talenti_bubble(r, eps, N)) * jac;
        },
        0.0, s_rho, core_panels);
  };
  out.core_h2 = core([](const Bubble& b) { return b.lap * b.lap; });
  out.core_l2 = core([](const Bubble& b) { return b.u * b.u; });
  out.core_crit = core([&](const Bubble& b) { return std::pow(b.u, pc); });
  out.core_log = core([](const Bubble& b) { return x2logx2(b.u); });

  // Bridge [rho, 2 rho].
  auto bridge = [&](auto&& g) {
    return gauss_panels(
        [&](double r) {
          const auto b = talenti_bubble(r, eps, N);
          const auto c = cutoff(r, rho);
          return g(b, c, r) * omega * std::pow(r, N - 1);
        },
        rho, 2.0 * rho, level * kBridgePanels);
  };
  auto lap_pu = [N](const Bubble& b, const Cutoff& c, double r) {
    const double lap_phi = c.d2 + (N - 1) * c.d1 / r;
    return c.phi * b.lap + 2.0 * c.d1 * b.du + b.u * lap_phi;
  };
  out.bridge_h2 = bridge([&](const Bubble& b, const Cutoff& c, double r) {
    const double v = lap_pu(b, c, r);
    return v * v;
  });
  out.bridge_h2_loss = bridge([&](const Bubble& b, const Cutoff& c, double r) {
    const double v = lap_pu(b, c, r);
    return v * v - b.lap * b.lap;
  });
  out.bridge_l2 = bridge([](const Bubble& b, const Cutoff& c, double) { return c.phi * c.phi * b.u * b.u; });
  out.bridge_crit = bridge([&](const Bubble& b, const Cutoff& c, double) { return std::pow(c.phi * b.u, pc); });
  out.bridge_crit_loss = bridge([&](const Bubble& b, const Cutoff& c, double) {
    return (std::pow(c.phi, pc) - 1.0) * std::pow(b.u, pc);
  });
  out.bridge_log = bridge([](const Bubble& b, const Cutoff& c, double) { return x2logx2(c.phi * b.u); });

  // Tail of the untruncated bubble beyond 2 rho, r = 2 rho / x.
  auto tail = [&](auto&& g) {
    return gauss_panels(
        [&](double x) {
          const double r = 2.0 * rho / x;
          return g(talenti_bubble(r, eps, N)) * omega * std::pow(r, N - 1) * 2.0 * rho / (x * x);
        },
        0.0, 1.0, level * kTailPanels);
  };
  out.tail_h2 = tail([](const Bubble& b) { return b.lap * b.lap; });
  out.tail_crit = tail([&](const Bubble& b) { return std::pow(b.u, pc); });
  return out;
}

NormBundle assemble(const Pieces& p) {
  NormBundle b;
  b.h2 = p.core_h2 + p.bridge_h2;
  b.l2 = p.core_l2 + p.bridge_l2;
  b.crit = p.core_crit + p.bridge_crit;
  b.logmom = p.core_log + p.bridge_log;
  b.h2_defect = p.bridge_h2_loss - p.tail_h2;
  b.crit_defect = p.bridge_crit_loss - p.tail_crit;
  return b;
}

void require_close(double a, double b, const char* what) {
  const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  if (rel > 1e-8)
    throw NumericalError(std::string("norm_bundle: ") + what + " drifted by " + std::to_string(rel) +
                         " between refinement levels");
}

}  // namespace

void validate(const TalentiSpec& spec, double R) {
  if (spec.N < 5) throw InvalidArgument("TalentiSpec: N must be at least 5");
  if (!(spec.eps > 0.0)) throw InvalidArgument("TalentiSpec: eps must be positive");
  if (!(spec.eps < spec.rho)) throw InvalidArgument("TalentiSpec: eps must be below rho");
  if (!(2.0 * spec.rho <= R * (1.0 + 1e-14)))
    throw InvalidArgument("TalentiSpec: cut-off support 2 rho exceeds the ball radius");
}

Cutoff cutoff(double r, double rho) {
  if (r <= rho) return {1.0, 0.0, 0.0};
  if (r >= 2.0 * rho) return {0.0, 0.0, 0.0};
  const double s = (r - rho) / rho;
  const auto A = smooth_step(1.0 - s);
  const auto B = smooth_step(s);
  // a = h(1 - s), b = h(s); phi = a / (a + b).
  const double a = A.h, a1 = -A.d1, a2 = A.d2;
  const double b = B.h, b1 = B.d1, b2 = B.d2;
  const double sum = a + b;
  const double num = a1 * b - a * b1;
  const double phi = a / sum;
  const double d1 = num / (sum * sum);
  const double d2 = (a2 * b - a * b2) / (sum * sum) - 2.0 * num * (a1 + b1) / (sum * sum * sum);
  return {phi, d1 / rho, d2 / (rho * rho)};
}

Bubble talenti_bubble(double r, double eps, int N) {
  const double C = talenti_constant(N);
  const double a = 0.5 * (N - 4);
  const double q = eps * eps + r * r;
  const double pre = C * std::pow(eps, a);
  const double u = pre * std::pow(q, -a);
  const double du = -(N - 4) * pre * r * std::pow(q, -a - 1.0);
  const double lap = -(N - 4) * pre * (N * eps * eps + 2.0 * r * r) * std::pow(q, -a - 2.0);
  return {u, du, lap};
}

RadialFunction talenti_profile(const TalentiSpec& spec, GridPtr grid) {
  validate(spec, grid->R());
  int core_nodes = 0;
  for (int j = 0; j < grid->size() && (*grid)[j] <= spec.eps; ++j) ++core_nodes;
  if (core_nodes < 8)
    throw InvalidArgument("talenti_profile: grid has " + std::to_string(core_nodes) +
                          " nodes in [0, eps], need at least 8");
  return RadialFunction::sample(std::move(grid), [&](double r) {
    return cutoff(r, spec.rho).phi * talenti_bubble(r, spec.eps, spec.N).u;
  });
}

NormBundle norm_bundle(const TalentiSpec& spec) {
  validate(spec, 2.0 * spec.rho);
  const auto coarse = assemble(integrate_pieces(spec, 1));
  const auto fine = assemble(integrate_pieces(spec, 2));
  require_close(coarse.h2, fine.h2, "h2");
  require_close(coarse.l2, fine.l2, "l2");
  require_close(coarse.crit, fine.crit, "crit");
  require_close(coarse.logmom, fine.logmom, "logmom");
  require_close(coarse.h2_defect, fine.h2_defect, "h2 defect");
  require_close(coarse.crit_defect, fine.crit_defect, "crit defect");
  return fine;
}

const char* to_string(Expansion which) {
  switch (which) {
    case Expansion::kNorms: return "norms";
    case Expansion::kHighDim: return "high_dim";
    case Expansion::kDim8: return "dim8";
    case Expansion::kLowDim: return "low_dim";
  }
  return "?";
}

double j_integral(int N) {
  if (N < 9) throw InvalidArgument("j_integral: diverges for N < 9");
  // r = tan(theta) turns the integrand into sin^{N-1} cos^{N-9}.
  const double body = gauss_panels(
      [N](double th) { return std::pow(std::sin(th), N - 1) * std::pow(std::cos(th), N - 9); }, 0.0,
      0.5 * std::numbers::pi, 32);
  return sphere_area(N) * body;
}

double cutoff_moment(int N, double rho) {
  auto f = [&](double r) {
    const double c = cutoff(r, rho).phi;
    return c * c * std::pow(r, 7 - N);
  };
  return gauss_panels(f, 0.0, rho, 8) + gauss_panels(f, rho, 2.0 * rho, 64);
}

Prediction predict(const TalentiSpec& spec, Expansion which) {
  const int N = spec.N;
  const double eps = spec.eps;
  const double rho = spec.rho;
  const double ell = std::log(1.0 / eps);
  const double C = talenti_constant(N);
  const double omega = sphere_area(N);
  Prediction out;
  out.which = which;
  switch (which) {
    case Expansion::kNorms:
      if (N < 5) throw InvalidArgument("predict: norms expansion needs N >= 5");
      out.h2 = sobolev_pow(N);
      out.crit = out.h2;
      out.h2_exponent = N - 4;
      out.crit_exponent = N;
      break;
    case Expansion::kHighDim:
      if (N < 9) throw InvalidArgument("predict: high_dim expansion needs N >= 9");
      out.J = j_integral(N);
      out.l2_coeff = C * C * out.J;
      out.l2 = out.l2_coeff * std::pow(eps, 4);
      out.logmom_coeff = (N - 4) * C * C * out.J;
      out.logmom = out.logmom_coeff * std::pow(eps, 4) * ell;
      break;
    case Expansion::kDim8: {
      if (N != 8) throw InvalidArgument("predict: dim8 expansion needs N = 8");
      out.l2_coeff = 1920.0 * omega;
      out.l2 = out.l2_coeff * std::pow(eps, 4) * ell;
      const double e2 = eps * eps;
      const double near = std::log(e2 + rho * rho);
      const double far = std::log(e2 + 4.0 * rho * rho);
      const double lower_log = std::log(1920.0) + 2.0 * near - 47.0 / 3.0 - 4.0 * far;
      const double upper_log = std::log(1920.0) + 37.0 / 3.0 + 2.0 * far - 4.0 * near;
      out.logmom_lower = out.l2 * lower_log;
      out.logmom_upper = out.l2 * upper_log;
      break;
    }
    case Expansion::kLowDim:
      if (N < 5 || N > 7) throw InvalidArgument("predict: low_dim expansion needs 5 <= N <= 7");
      out.moment = cutoff_moment(N, rho);
      out.l2_coeff = C * C * omega * out.moment;
      out.l2 = out.l2_coeff * std::pow(eps, N - 4);
      out.logmom_coeff = (N - 4) * C * C * omega * out.moment;
      out.logmom = out.logmom_coeff * std::pow(eps, N - 4) * std::log(eps);
      break;
  }
  return out;
}

double evaluate(const BasisTerm& b, double eps) {
  return std::pow(eps, b.power) * std::pow(std::log(1.0 / eps), b.log_power);
}

const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::kH2Defect: return "h2_defect";
    case Quantity::kL2: return "l2";
    case Quantity::kLogMom: return "logmom";
    case Quantity::kCritDefect: return "crit_defect";
  }
  return "?";
}

double pick(const NormBundle& b, Quantity q) {
  switch (q) {
    case Quantity::kH2Defect: return b.h2_defect;
    case Quantity::kL2: return b.l2;
    case Quantity::kLogMom: return b.logmom;
    case Quantity::kCritDefect: return b.crit_defect;
  }
  return 0.0;
}

std::vector<BasisTerm> fit_basis(Quantity q, int N) {
  if (N < 5) throw InvalidArgument("fit_basis: N must be at least 5");
  const int p = N - 4;
  std::vector<BasisTerm> out;
  auto add = [&](int power, int log_power) {
    for (const auto& b : out)
      if (b.power == power && b.log_power == log_power) return;
    out.push_back({power, log_power});
  };
  switch (q) {
    case Quantity::kH2Defect:
      add(p, 0);
      add(p + 2, 0);
      break;
    case Quantity::kCritDefect:
      add(N, 0);
      add(N + 2, 0);
      break;
    case Quantity::kL2:
      if (N == 8) {
        add(4, 1), add(4, 0), add(6, 0), add(8, 0);
      } else if (N >= 9) {
        add(4, 0), add(p, 0), add(p + 2, 0);
      } else if (N == 6) {
        add(2, 0), add(4, 1), add(4, 0);
      } else {
        add(p, 0), add(4, 0), add(p + 2, 0);
      }
      break;
    case Quantity::kLogMom:
      if (N == 8) {
        add(4, 1), add(4, 0), add(6, 1), add(6, 0), add(8, 1), add(8, 0);
      } else if (N >= 9) {
        add(4, 1), add(4, 0), add(p, 1), add(p, 0), add(p + 2, 1), add(p + 2, 0);
      } else {
        add(p, 1), add(p, 0), add(p + 2, 1), add(p + 2, 0), add(4, 1), add(4, 0);
      }
      break;
  }
  return out;
}

double FitRecord::coefficient(const BasisTerm& b) const {
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (basis[k].power == b.power && basis[k].log_power == b.log_power) return coefficients[k];
  return std::numeric_limits<double>::quiet_NaN();
}

FitRecord fit_coefficients(const std::vector<double>& eps, const std::vector<double>& y,
                           const std::vector<BasisTerm>& basis) {
  const int m = static_cast<int>(eps.size());
  const int k = static_cast<int>(basis.size());
  if (m != static_cast<int>(y.size())) throw InvalidArgument("fit_coefficients: size mismatch");
  if (m < 6) throw InvalidArgument("fit_coefficients: need at least 6 samples");
  if (k < 1 || k > m) throw InvalidArgument("fit_coefficients: basis larger than sample set");
  const auto [lo, hi] = std::minmax_element(eps.begin(), eps.end());
  if (!(*lo > 0.0) || *hi / *lo < 10.0 * (1.0 - 1e-12))
    throw InvalidArgument("fit_coefficients: samples must span at least one decade of eps");
  Eigen::MatrixXd A(m, k);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    const double wgt = 1.0 / std::abs(y[i]);
    if (!std::isfinite(wgt)) throw InvalidArgument("fit_coefficients: zero or non-finite sample");
    for (int j = 0; j < k; ++j) A(i, j) = evaluate(basis[j], eps[i]) * wgt;
    b(i) = y[i] * wgt;
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int j = 0; j < k; ++j) A.col(j) /= scale(j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(k - 1);
  if (!(cond < 1e12)) throw NumericalError("fit_coefficients: ill-conditioned basis (condition " +
                                           std::to_string(cond) + ")");
  const Eigen::VectorXd x = svd.solve(b);
  FitRecord rec;
  rec.basis = basis;
  rec.condition = cond;
  rec.residual_norm = (A * x - b).norm();
  rec.coefficients.resize(k);
  for (int j = 0; j < k; ++j) rec.coefficients[j] = x(j) / scale(j);
  return rec;
}

FitRecord fit_coefficients(const std::vector<Sample>& samples, Quantity q, int N) {
  std::vector<double> eps, y;
  for (const auto& [e, b] : samples) {
    eps.push_back(e);
    y.push_back(pick(b, q));
  }
  return fit_coefficients(eps, y, fit_basis(q, N));
}

double loglog_slope(const std::vector<double>& eps, const std::vector<double>& y) {
  const int m = static_cast<int>(eps.size());
  if (m < 2 || m != static_cast<int>(y.size())) throw InvalidArgument("loglog_slope: need matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(eps[i]);
    const double v = std::log(std::abs(y[i]));
    sx += x, sy += v, sxx += x * x, sxy += x * v;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<double> eps_ladder(int points, double lo, double hi) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw InvalidArgument("eps_ladder: bad range");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = hi * std::pow(lo / hi, static_cast<double>(i) / (points - 1));
  return out;
}

RaySup sup_along_ray(const NormBundle& b, int N, const Params& p) {
  if (p.N != N) throw InvalidArgument("sup_along_ray: dimension mismatch");
  const double S = sobolev_pow(N);
  const double pc = critical_exponent(N);
  // I(t u) - c(S) split so the O(1) parts cancel analytically.
  auto excess = [&](double x) {
    const double t = std::exp(x);
    const double tau = std::expm1(x);
    const double t2 = t * t;
    const double bulk = S * (0.5 * tau * (2.0 + tau) - std::expm1(pc * x) / pc);
    const double q = 0.5 * (p.mu - p.lambda) * b.l2 - 0.5 * p.mu * (b.logmom + 2.0 * x * b.l2);
    return bulk + 0.5 * t2 * b.h2_defect - std::pow(t, pc) * b.crit_defect / pc + t2 * q;
  };
  const double x0 = std::log(1e-3);
  const double x1 = std::log(1e3);
  const int points = 2001;
  int kbest = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double v = excess(x0 + (x1 - x0) * k / (points - 1));
    if (v > best) {
      best = v;
      kbest = k;
    }
  }
  if (kbest == 0 || kbest == points - 1)
    throw NumericalError("sup_along_ray: maximiser on the scan boundary");
  const double dx = (x1 - x0) / (points - 1);
  const double xk = x0 + dx * kbest;
  const auto ext = golden_max(excess, xk - dx, xk + dx, 1e-15);
  RaySup out;
  out.t_eps = std::exp(ext.x);
  out.excess = ext.value;
  out.sup_value = threshold_cS(S, N) + ext.value;
  return out;
}

RaySup sup_along_ray(const TalentiSpec& spec, const Params& p) {
  validate(p);
  validate(spec, p.R);
  if (spec.N != p.N) throw InvalidArgument("sup_along_ray: dimension mismatch");
  return sup_along_ray(norm_bundle(spec), spec.N, p);
}

}  // namespace logplate
