#pragma once

#include <functional>
#include <span>
#include <vector>

namespace logplate {

// Composite Gauss-Legendre rule (20 points per panel) over [a, b] split into
// `panels` equal pieces.
double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels);

// Same rule with caller-supplied panel breakpoints (ascending).
double gauss_breaks(const std::function<double(double)>& f, std::span<const double> breaks);

// Fourth-order Gregory end corrections for a uniform composite rule with n
// nodes; multiply by the spacing to get weights.
std::vector<double> gregory_weights(int n);

// Finite-difference weights for the m-th derivative at x0 from the given
// nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

struct Extremum {
  double x;
  double value;
};

// Golden-section search for a maximum of f on [a, b].
Extremum golden_max(const std::function<double(double)>& f, double a, double b,
                    double xtol = 1e-14, int max_iter = 200);

// Root of f in [a, b] with f(a), f(b) of opposite sign. Illinois false
// position with a bisection fallback whenever the bracket stops shrinking.
double bracketed_root(const std::function<double(double)>& f, double a, double b,
                      double fa, double fb, double xtol, double ftol);

}  // namespace logplate
