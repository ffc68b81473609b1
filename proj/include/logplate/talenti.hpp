#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "logplate/constants.hpp"
#include "logplate/discretization.hpp"

namespace logplate {

// u_eps = phi U_eps with phi = 1 on [0, rho] and 0 beyond 2 rho.
struct TalentiSpec {
  double eps = 0.01;
  double rho = 0.25;
  int N = 8;
};

// Throws unless 0 < eps < rho and 2 rho <= R.
void validate(const TalentiSpec& spec, double R);

struct Cutoff {
  double phi;
  double d1;  // d phi / dr
  double d2;  // d^2 phi / dr^2
};
Cutoff cutoff(double r, double rho);

// U_eps(r) = C_N eps^{(N-4)/2} (eps^2 + r^2)^{-(N-4)/2} and its derivatives.
struct Bubble {
  double u;
  double du;   // dU/dr
  double lap;  // Delta U
};
Bubble talenti_bubble(double r, double eps, int N);

RadialFunction talenti_profile(const TalentiSpec& spec, GridPtr grid);

struct NormBundle {
  double h2 = 0.0;      // |Delta u_eps|_2^2
  double l2 = 0.0;      // |u_eps|_2^2
  double crit = 0.0;    // |u_eps|_{2**}^{2**}
  double logmom = 0.0;  // integral of u_eps^2 ln u_eps^2
  // h2 - S^{N/4} and crit - S^{N/4}, integrated directly so tiny defects
  // keep full relative accuracy.
  double h2_defect = 0.0;
  double crit_defect = 0.0;
};

// Gauss-Legendre panels in s with r = eps sinh(s) on [0, rho], uniform
// panels on [rho, 2 rho] and r = 2 rho / x beyond. Two refinement levels
// must agree to 1e-8 relative.
NormBundle norm_bundle(const TalentiSpec& spec);

enum class Expansion { kNorms, kHighDim, kDim8, kLowDim };
const char* to_string(Expansion which);

struct Prediction {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  Expansion which = Expansion::kNorms;
  double h2 = nan;  // leading values of h2 and crit
  double crit = nan;
  int h2_exponent = 0;
  int crit_exponent = 0;
  double l2_coeff = nan;      // coefficient of the leading l2 basis function
  double l2 = nan;            // l2_coeff times that function at eps
  double logmom_coeff = nan;  // coefficient of the leading logmom basis function
  double logmom = nan;
  double logmom_lower = nan;  // bracket for N = 8
  double logmom_upper = nan;
  double J = nan;             // integral of (1 + |y|^2)^{4-N} over R^N
  double moment = nan;        // integral of phi^2 r^{7-N} over [0, 2 rho]
};

// Leading-order predictions. kHighDim needs N >= 9, kDim8 needs N = 8 and kLowDim
// needs 5 <= N <= 7.
Prediction predict(const TalentiSpec& spec, Expansion which);

// The whole-space integral of (1 + |y|^2)^{4-N} via r = tan(theta).
double j_integral(int N);
double cutoff_moment(int N, double rho);

// eps^power * ln(1/eps)^log_power.
struct BasisTerm {
  int power;
  int log_power;
};
double evaluate(const BasisTerm& b, double eps);

enum class Quantity { kH2Defect, kL2, kLogMom, kCritDefect };
const char* to_string(Quantity q);
double pick(const NormBundle& b, Quantity q);

// Leading term first, followed by the correction terms its remainder
// contains.
std::vector<BasisTerm> fit_basis(Quantity q, int N);

struct FitRecord {
  std::vector<BasisTerm> basis;
  std::vector<double> coefficients;
  double residual_norm = 0.0;  // relative-weighted
  double condition = 0.0;      // of the column-scaled weighted design matrix
  double lead() const { return coefficients.front(); }
  // Coefficient of one basis function; NaN if absent.
  double coefficient(const BasisTerm& b) const;
};

using Sample = std::pair<double, NormBundle>;

// Relative-weighted least squares of one bundle entry on fit_basis(q, N).
FitRecord fit_coefficients(const std::vector<Sample>& samples, Quantity q, int N);
FitRecord fit_coefficients(const std::vector<double>& eps, const std::vector<double>& y,
                           const std::vector<BasisTerm>& basis);
// Least-squares slope of ln|y| against ln eps.
double loglog_slope(const std::vector<double>& eps, const std::vector<double>& y);

// Geometric ladder from hi down to lo.
std::vector<double> eps_ladder(int points = 8, double lo = 1e-3, double hi = 1e-1);

struct RaySup {
  double sup_value = 0.0;
  double t_eps = 0.0;
  double excess = 0.0;  // sup_value - c(S), computed without cancellation
};

// Maximises t -> I(t u_eps) over a log scan of [1e-3, 1e3] refined by
// golden section, with the norms from norm_bundle.
RaySup sup_along_ray(const TalentiSpec& spec, const Params& p);
RaySup sup_along_ray(const NormBundle& b, int N, const Params& p);

}  // namespace logplate
