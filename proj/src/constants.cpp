#include "logplate/constants.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "logplate/discretization.hpp"
#include "logplate/error.hpp"
#include "logplate/numerics.hpp"

namespace logplate {

namespace {

void require_dimension(int N) {
  if (N < 5) throw InvalidArgument("dimension must be at least 5, got " + std::to_string(N));
}

}  // namespace

void validate(const Params& p) {
  require_dimension(p.N);
  if (!(p.R > 0.0) || !std::isfinite(p.R)) throw InvalidArgument("radius must be positive");
  if (!std::isfinite(p.lambda) || !std::isfinite(p.mu))
    throw InvalidArgument("lambda and mu must be finite");
}

double critical_exponent(int N) {
  require_dimension(N);
  return 2.0 * N / (N - 4.0);
}

double talenti_constant(int N) {
  require_dimension(N);
  const double base = static_cast<double>(N) * (N - 4) * (N * N - 4);
  return std::pow(base, (N - 4) / 8.0);
}

double sphere_area(int N) {
  if (N < 1) throw InvalidArgument("sphere_area: N must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double ball_volume(int N, double R) { return sphere_area(N) * std::pow(R, N) / N; }

double gamma_half(int k) {
  if (k < 1) throw InvalidArgument("gamma_half: argument must be positive");
  // Gamma(1/2) = sqrt(pi), Gamma(1) = 1, then Gamma(x + 1) = x Gamma(x).
  double g = (k % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  for (int j = (k % 2 == 0) ? 2 : 1; j < k; j += 2) g *= 0.5 * j;
  return g;
}

double sobolev_pow_closed(int N) {
  const double p = critical_exponent(N);
  return std::pow(talenti_constant(N), p) * 0.5 * sphere_area(N) * std::beta(0.5 * N, 0.5 * N);
}

double sobolev_pow_quadrature(int N) {
  require_dimension(N);
  const double C = talenti_constant(N);
  const double k = (N - 4.0) * C;
  // |Delta U_1|^2 r^{N-1} dr/ds with r = sinh(s), written through tanh and
  // cosh so nothing overflows for large s.
  auto integrand = [&](double s) {
    const double ch = std::cosh(s);
    const double th = std::tanh(s);
    const double bracket = 0.5 * N / (ch * ch) + th * th;
    return 4.0 * k * k * bracket * bracket * std::pow(ch, 4.0 - N) * std::pow(th, N - 1.0);
  };
  const double width = 0.25;
  double peak = 0.0;
  double s_cut = 0.0;
  for (int j = 1; j < 4000; ++j) {
    const double s = j * width;
    const double v = integrand(s);
    peak = std::max(peak, v);
    if (v < 1e-16 * peak && s > 1.0) {
      s_cut = s;
      break;
    }
  }
  if (s_cut == 0.0) throw NumericalError("sobolev_pow_quadrature: integrand never decayed");
  const int panels = static_cast<int>(std::lround(s_cut / width));
  const double body = gauss_panels(integrand, 0.0, s_cut, panels);
  const double r_cut = std::sinh(s_cut);
  const double tail = 4.0 * (N - 4.0) * C * C * std::pow(r_cut, 4.0 - N);
  return sphere_area(N) * (body + tail);
}

double sobolev_pow(int N) {
  const double a = sobolev_pow_closed(N);
  const double b = sobolev_pow_quadrature(N);
  const double rel = std::abs(a - b) / std::abs(a);
  if (!(rel <= 1e-6)) {
    throw NumericalError("sobolev_pow: closed form " + std::to_string(a) + " and quadrature " +
                         std::to_string(b) + " disagree (relative " + std::to_string(rel) + ")");
  }
  return a;
}

double threshold_cS(double S_pow, int N) {
  if (!(S_pow > 0.0)) throw InvalidArgument("threshold_cS: S_pow must be positive");
  return 2.0 / N * S_pow;
}

Constants make_constants(const Params& p, int grid_size) {
  validate(p);
  Constants c;
  c.N = p.N;
  c.R = p.R;
  c.p_crit = critical_exponent(p.N);
  c.C_N = talenti_constant(p.N);
  c.omega_N = sphere_area(p.N);
  c.volume = ball_volume(p.N, p.R);
  c.S_pow = sobolev_pow(p.N);
  c.cS = threshold_cS(c.S_pow, p.N);
  const auto grid = RadialGrid::uniform(p.R, grid_size);
  c.lambda1 = first_eigen_clamped(grid, p.N);
  c.lambda1_lap = first_eigen_laplace(grid, p.N);
  return c;
}

}  // namespace logplate
