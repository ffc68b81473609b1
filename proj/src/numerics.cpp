#include "logplate/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "logplate/error.hpp"

namespace logplate {

double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) throw InvalidArgument("gauss_panels: need at least one panel");
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * width;
    const double hi = (k + 1 == panels) ? b : lo + width;
    sum += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
  }
  return sum;
}

double gauss_breaks(const std::function<double(double)>& f, std::span<const double> breaks) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k + 1] > breaks[k])
      sum += boost::math::quadrature::gauss<double, 20>::integrate(f, breaks[k], breaks[k + 1]);
  }
  return sum;
}

std::vector<double> gregory_weights(int n) {
  if (n < 6) throw InvalidArgument("gregory_weights: need at least 6 nodes");
  std::vector<double> q(n, 1.0);
  const double ends[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (int k = 0; k < 3; ++k) {
    q[k] = ends[k];
    q[n - 1 - k] = ends[k];
  }
  return q;
}

std::vector<double> fd_weights(double x0, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  if (n <= m) throw InvalidArgument("fd_weights: not enough nodes for derivative order");
  // c[j][k]: weight of node j for derivative k.
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

Extremum golden_max(const std::function<double(double)>& f, double a, double b, double xtol,
                    int max_iter) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? Extremum{x1, f1} : Extremum{x2, f2};
}

double bracketed_root(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double xtol, double ftol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw NumericalError("bracketed_root: endpoints do not bracket");
  int side = 0;
  for (int it = 0; it < 300; ++it) {
    double x = (a * fb - b * fa) / (fb - fa);
    if (!(x > a && x < b)) x = 0.5 * (a + b);
    // Fall back to bisection every few steps so the bracket keeps shrinking.
    if (it % 4 == 3) x = 0.5 * (a + b);
    const double fx = f(x);
    if (fx == 0.0 || std::abs(fx) <= ftol) return x;
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = x;
      fb = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (b - a <= xtol * (1.0 + std::abs(a) + std::abs(b))) break;
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace logplate
