#include "logplate/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logplate/constants.hpp"
#include "logplate/error.hpp"
#include "logplate/numerics.hpp"

namespace logplate {

namespace {

constexpr int kMinNodes = 16;

struct StencilRow {
  int first = 0;
  int len = 0;
  std::array<double, 4> c{};
};

// Rows of the discrete radial Laplacian.
std::vector<StencilRow> laplacian_rows(const RadialGrid& g, int N, OuterClosure closure) {
  const int n = g.size();
  std::vector<StencilRow> rows(n);
  const auto r = g.nodes();
  // Even extension: ghost u(-r_1) = u(r_1), so Delta u(0) = N u''(0).
  const double k0 = 2.0 * N / (r[1] * r[1]);
  rows[0] = {0, 2, {-k0, k0, 0.0, 0.0}};
  for (int i = 1; i < n - 1; ++i) {
    const auto nodes = r.subspan(i - 1, 3);
    const auto d2 = fd_weights(r[i], nodes, 2);
    const auto d1 = fd_weights(r[i], nodes, 1);
    StencilRow row{i - 1, 3, {}};
    for (int k = 0; k < 3; ++k) row.c[k] = d2[k] + (N - 1) / r[i] * d1[k];
    rows[i] = row;
  }
  const double R = r[n - 1];
  if (closure == OuterClosure::kClamped) {
    const double d = R - r[n - 2];
    rows[n - 1] = {n - 2, 2, {2.0 / (d * d), -2.0 / (d * d), 0.0, 0.0}};
  } else {
    const auto nodes = r.subspan(n - 4, 4);
    const auto d2 = fd_weights(R, nodes, 2);
    const auto d1 = fd_weights(R, nodes, 1);
    StencilRow row{n - 4, 4, {}};
    for (int k = 0; k < 4; ++k) row.c[k] = d2[k] + (N - 1) / R * d1[k];
    rows[n - 1] = row;
  }
  return rows;
}

void require_same_grid(const RadialFunction& u) {
  if (!u.grid) throw InvalidArgument("RadialFunction has no grid");
  if (u.size() != u.grid->size()) throw InvalidArgument("RadialFunction length does not match grid");
}

double weighted_sq(std::span<const double> w, std::span<const double> x, int count) {
  double s = 0.0;
  for (int i = 0; i < count; ++i) s += w[i] * x[i] * x[i];
  return s;
}

}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes, std::vector<double> line, double c)
    : nodes_(std::move(nodes)), line_(std::move(line)), c_(c) {}

RadialGrid RadialGrid::uniform(double R, int n) {
  if (!(R > 0.0)) throw InvalidArgument("RadialGrid: radius must be positive");
  if (n < kMinNodes) throw InvalidArgument("RadialGrid: need at least 16 nodes");
  std::vector<double> r(n);
  const double h = R / (n - 1);
  for (int j = 0; j < n; ++j) r[j] = j * h;
  r[n - 1] = R;
  auto q = gregory_weights(n);
  for (double& v : q) v *= h;
  return RadialGrid(std::move(r), std::move(q), 0.0);
}

RadialGrid RadialGrid::graded(double R, int n, double c) {
  if (!(R > 0.0)) throw InvalidArgument("RadialGrid: radius must be positive");
  if (n < kMinNodes) throw InvalidArgument("RadialGrid: need at least 16 nodes");
  if (!(c > 0.0)) throw InvalidArgument("RadialGrid: grading must be positive");
  std::vector<double> r(n);
  auto q = gregory_weights(n);
  const double ds = 1.0 / (n - 1);
  const double sc = std::sinh(c);
  for (int j = 0; j < n; ++j) {
    const double s = j * ds;
    r[j] = R * std::sinh(c * s) / sc;
    q[j] *= ds * R * c * std::cosh(c * s) / sc;
  }
  r[0] = 0.0;
  r[n - 1] = R;
  return RadialGrid(std::move(r), std::move(q), c);
}

std::vector<double> RadialGrid::ball_weights(int N) const {
  const double omega = sphere_area(N);
  const int n = size();
  std::vector<double> w(n);
  for (int j = 1; j < n; ++j) w[j] = omega * line_[j] * std::pow(nodes_[j], N - 1);
  // The r^{N-1} factor kills the Gregory weight at the origin; give node 0
  // the volume of the ball of radius r_1/2 so the mass matrix stays definite.
  w[0] = omega * std::pow(0.5 * nodes_[1], N) / N;
  return w;
}

RadialGrid RadialGrid::refined() const {
  const int m = 2 * size() - 1;
  return is_uniform() ? uniform(R(), m) : graded(R(), m, c_);
}

RadialFunction::RadialFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  require_same_grid(*this);
}

RadialFunction RadialFunction::zeros(GridPtr g) {
  const int n = g->size();
  return RadialFunction(std::move(g), std::vector<double>(n, 0.0));
}

RadialFunction RadialFunction::sample(GridPtr g, const std::function<double(double)>& f) {
  std::vector<double> v(g->size());
  for (int j = 0; j < g->size(); ++j) v[j] = f((*g)[j]);
  return RadialFunction(std::move(g), std::move(v));
}

GridPtr make_uniform(double R, int n) { return std::make_shared<const RadialGrid>(RadialGrid::uniform(R, n)); }

RadialFunction laplacian_radial(const RadialFunction& u, int N, OuterClosure closure) {
  require_same_grid(u);
  const auto rows = laplacian_rows(*u.grid, N, closure);
  std::vector<double> out(u.size(), 0.0);
  for (int i = 0; i < u.size(); ++i) {
    const auto& row = rows[i];
    for (int k = 0; k < row.len; ++k) out[i] += row.c[k] * u.values[row.first + k];
  }
  return RadialFunction(u.grid, std::move(out));
}

RadialFunction gradient_radial(const RadialFunction& u) {
  require_same_grid(u);
  const auto r = u.grid->nodes();
  const int n = u.size();
  std::vector<double> out(n, 0.0);
  for (int i = 1; i < n; ++i) {
    const int first = (i == n - 1) ? n - 3 : i - 1;
    const auto w = fd_weights(r[i], r.subspan(first, 3), 1);
    for (int k = 0; k < 3; ++k) out[i] += w[k] * u.values[first + k];
  }
  return RadialFunction(u.grid, std::move(out));
}

double quad_ball(const RadialFunction& f, int N) {
  require_same_grid(f);
  const auto w = f.grid->ball_weights(N);
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += w[j] * f.values[j];
  return s;
}

double h2_norm(const RadialFunction& u, int N) {
  const auto lap = laplacian_radial(u, N, OuterClosure::kClamped);
  const auto w = u.grid->ball_weights(N);
  return std::sqrt(weighted_sq(w, lap.values, u.size()));
}

double dirichlet_energy(const RadialFunction& u, int N) {
  const auto du = gradient_radial(u);
  const auto w = u.grid->ball_weights(N);
  return weighted_sq(w, du.values, u.size());
}

RadialFunction bilaplacian_strong(const RadialFunction& u, int N) {
  return laplacian_radial(laplacian_radial(u, N, OuterClosure::kClamped), N, OuterClosure::kOneSided);
}

void enforce_clamp(RadialFunction& u) {
  require_same_grid(u);
  u.values.back() = 0.0;
}

namespace {

// Trapezoid ball weights. With the mirror-ghost row at R these make L^T W L
// the classical second-order ghost-point scheme; end-corrected weights there
// would leave a first-order boundary layer.
std::vector<double> stiffness_weights(const RadialGrid& g, int N, std::span<const double> ball) {
  const int n = g.size();
  const double omega = sphere_area(N);
  const double ds = 1.0 / (n - 1);
  std::vector<double> w(n);
  w[0] = ball[0];
  for (int j = 1; j < n; ++j) {
    const double s = j * ds;
    const double jac = g.is_uniform() ? g.R() : g.R() * g.grading() * std::cosh(g.grading() * s) / std::sinh(g.grading());
    w[j] = omega * ds * jac * std::pow(g[j], N - 1);
  }
  w[n - 1] *= 0.5;
  return w;
}

}  // namespace

ClampedOperator::ClampedOperator(GridPtr grid, int N)
    : grid_(std::move(grid)), N_(N), w_(grid_->ball_weights(N)), A_(grid_->size() - 1, 2) {
  const int n = grid_->size();
  const int m = n - 1;
  ws_ = stiffness_weights(*grid_, N, w_);
  const auto rows = laplacian_rows(*grid_, N, OuterClosure::kClamped);
  rows_.resize(n);
  for (int i = 0; i < n; ++i) {
    FreeRow& row = rows_[i];
    row.first = rows[i].first;
    row.len = std::min(rows[i].len, m - rows[i].first);
    for (int k = 0; k < row.len; ++k) row.c[k] = rows[i].c[k];
    for (int a = 0; a < row.len; ++a)
      for (int b = a; b < row.len; ++b) A_.at(row.first + a, b - a) += ws_[i] * row.c[a] * row.c[b];
  }
  factor_ = std::make_unique<BandLDLT>(A_);
}

bool ClampedOperator::is_clamped(std::span<const double> u) const {
  return static_cast<int>(u.size()) == nodes() && u.back() == 0.0;
}

std::vector<double> ClampedOperator::laplacian(std::span<const double> u) const {
  const int n = nodes();
  if (static_cast<int>(u.size()) != n) throw InvalidArgument("ClampedOperator: size mismatch");
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const FreeRow& row = rows_[i];
    for (int k = 0; k < row.len; ++k) out[i] += row.c[k] * u[row.first + k];
  }
  return out;
}

std::vector<double> ClampedOperator::apply(std::span<const double> u) const {
  const auto lap = laplacian(u);
  std::vector<double> out(unknowns(), 0.0);
  for (int i = 0; i < nodes(); ++i) {
    const FreeRow& row = rows_[i];
    const double wl = ws_[i] * lap[i];
    for (int k = 0; k < row.len; ++k) out[row.first + k] += row.c[k] * wl;
  }
  return out;
}

double ClampedOperator::h2(std::span<const double> u) const {
  const auto lap = laplacian(u);
  return weighted_sq(ws_, lap, nodes());
}

std::vector<double> ClampedOperator::load(std::span<const double> f) const {
  const int m = unknowns();
  std::vector<double> b(m);
  for (int i = 0; i < m; ++i) b[i] = w_[i] * f[i];
  return b;
}

std::vector<double> ClampedOperator::solve(std::span<const double> b) const {
  auto x = factor_->solve(b);
  x.push_back(0.0);
  return x;
}

std::vector<double> ClampedOperator::solve_load(std::span<const double> f) const { return solve(load(f)); }

RadialFunction biharmonic_solve(const RadialFunction& f, int N) {
  require_same_grid(f);
  for (double v : f.values)
    if (!std::isfinite(v)) throw InvalidArgument("biharmonic_solve: non-finite load");
  const ClampedOperator op(f.grid, N);
  return RadialFunction(f.grid, op.solve_load(f.values));
}

namespace {

constexpr int kEigenCap = 10000;

// Inverse power iteration for the pencil (K, W) restricted to the first m
// unknowns; `apply_inverse` maps x to K^{-1} W x and `form` evaluates x^T K x.
EigenPair inverse_power(const GridPtr& grid, std::span<const double> w, int m,
                        const std::function<std::vector<double>(const std::vector<double>&)>& apply_inverse,
                        const std::function<double(const std::vector<double>&)>& form) {
  const int n = grid->size();
  const double R = grid->R();
  std::vector<double> x(n, 0.0);
  for (int i = 0; i < m; ++i) {
    const double s = 1.0 - (*grid)[i] * (*grid)[i] / (R * R);
    x[i] = s * s;
  }
  double previous = 0.0;
  for (int it = 1; it <= kEigenCap; ++it) {
    std::vector<double> y = apply_inverse(x);
    const double norm = std::sqrt(weighted_sq(w, y, n));
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("inverse power iteration broke down");
    for (double& v : y) v /= norm;
    const double rq = form(y);
    x = std::move(y);
    if (it > 1 && std::abs(rq - previous) < 1e-10 * std::abs(rq)) {
      if (x[0] < 0.0)
        for (double& v : x) v = -v;
      return {rq, RadialFunction(grid, x), it};
    }
    previous = rq;
  }
  throw NumericalError("inverse power iteration did not converge in " + std::to_string(kEigenCap) +
                       " iterations");
}

}  // namespace

EigenPair first_eigenpair_clamped(GridPtr grid, int N) {
  const ClampedOperator op(grid, N);
  const int m = op.unknowns();
  return inverse_power(
      grid, op.weights(), m, [&](const std::vector<double>& x) { return op.solve_load(x); },
      [&](const std::vector<double>& x) { return op.h2(x); });
}

double first_eigen_clamped(const RadialGrid& grid, int N) {
  return first_eigenpair_clamped(std::make_shared<const RadialGrid>(grid), N).value;
}

EigenPair first_eigenpair_laplace(GridPtr grid, int N) {
  const int n = grid->size();
  const int m = n - 1;
  const double omega = sphere_area(N);
  const auto w = grid->ball_weights(N);
  // Dirichlet form: omega * sum over cells of r_{i+1/2}^{N-1} (du)^2 / dr,
  // symmetric by construction.
  SymBandMatrix K(m, 1);
  std::vector<double> kappa(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double dr = (*grid)[i + 1] - (*grid)[i];
    const double mid = 0.5 * ((*grid)[i + 1] + (*grid)[i]);
    kappa[i] = omega * std::pow(mid, N - 1) / dr;
    K.at(i, 0) += kappa[i];
    if (i + 1 < m) {
      K.at(i + 1, 0) += kappa[i];
      K.at(i, 1) -= kappa[i];
    }
  }
  const BandLDLT factor(K);
  return inverse_power(
      grid, w, m,
      [&](const std::vector<double>& x) {
        std::vector<double> b(m);
        for (int i = 0; i < m; ++i) b[i] = w[i] * x[i];
        auto y = factor.solve(b);
        y.push_back(0.0);
        return y;
      },
      [&](const std::vector<double>& x) {
        double s = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
          const double d = x[i + 1] - x[i];
          s += kappa[i] * d * d;
        }
        return s;
      });
}

double first_eigen_laplace(const RadialGrid& grid, int N) {
  return first_eigenpair_laplace(std::make_shared<const RadialGrid>(grid), N).value;
}

RadialFunction interpolate(const RadialFunction& u, GridPtr target) {
  require_same_grid(u);
  const auto r = u.grid->nodes();
  const int n = u.size();
  if (std::abs(target->R() - u.grid->R()) > 1e-14 * u.grid->R())
    throw InvalidArgument("interpolate: grids cover different intervals");
  std::vector<double> out(target->size());
  for (int j = 0; j < target->size(); ++j) {
    const double x = (*target)[j];
    const int upper = static_cast<int>(std::upper_bound(r.begin(), r.end(), x) - r.begin());
    const int first = std::clamp(upper - 2, 0, n - 4);
    const auto w = fd_weights(x, r.subspan(first, 4), 0);
    double v = 0.0;
    for (int k = 0; k < 4; ++k) v += w[k] * u.values[first + k];
    out[j] = v;
  }
  return RadialFunction(std::move(target), std::move(out));
}

}  // namespace logplate
