#include "logplate/corpus.hpp"

#include <cmath>
#include <numbers>

namespace logplate {

namespace {

double clamp_factor(double r, double R) {
  const double s = 1.0 - (r / R) * (r / R);
  return s * s;
}

}  // namespace

RadialFunction random_bump(GridPtr grid, Rng& rng) {
  const double R = grid->R();
  const double amp = rng.uniform(0.5, 2.0);
  const double width = rng.uniform(0.3, 0.8) * R;
  auto u = RadialFunction::sample(std::move(grid), [&](double r) {
    return amp * clamp_factor(r, R) * std::exp(-(r / width) * (r / width));
  });
  enforce_clamp(u);
  return u;
}

RadialFunction random_profile(GridPtr grid, Rng& rng) {
  const double R = grid->R();
  const double amp = std::pow(10.0, rng.uniform(-2.0, 2.0));
  double c[4];
  c[0] = rng.uniform(0.2, 1.0);
  for (int k = 1; k < 4; ++k) c[k] = rng.uniform(-0.5, 0.5) / k;
  auto u = RadialFunction::sample(std::move(grid), [&](double r) {
    double series = 0.0;
    for (int k = 0; k < 4; ++k) series += c[k] * std::cos(k * std::numbers::pi * r / R);
    return amp * clamp_factor(r, R) * series;
  });
  enforce_clamp(u);
  return u;
}

}  // namespace logplate
