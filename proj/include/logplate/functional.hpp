#pragma once

#include <string>
#include <utility>
#include <vector>

#include "logplate/constants.hpp"
#include "logplate/discretization.hpp"

namespace logplate {

// The four integrals that determine I(t u) for every t.
struct FiberScalars {
  double h2 = 0.0;      // |Delta u|_2^2
  double l2 = 0.0;      // |u|_2^2
  double logmom = 0.0;  // integral of u^2 ln u^2
  double crit = 0.0;    // |u|_{2**}^{2**}
};

enum class Branch { kNplus, kNzero, kNminus };
const char* to_string(Branch b);

struct FiberingReport {
  double t_star = 0.0;
  double psi1 = 0.0;               // psi_u'(t_star)
  double psi2_at_one_after = 0.0;  // psi''_{t_star u}(1)
  Branch branch = Branch::kNzero;
  int roots_found = 0;             // sign changes of psi_u' on the scan
};

struct Residual {
  RadialFunction rep;  // Riesz representative G
  double norm = 0.0;   // |Delta G|_2
};

// Scalar-level fibering map of the energy; every evaluation is O(1).
double fibering(const FiberScalars& s, const Params& p, double t);
// (psi_u'(t), psi_u''(t)).
std::pair<double, double> fibering_derivs(const FiberScalars& s, const Params& p, double t);
// t(u) as in the Nehari projection; see nehari_project.
FiberingReport nehari_project(const FiberScalars& s, const Params& p);

// Discrete energy and its derivatives on one grid. The constructor
// factorises the clamped bilaplacian once, so repeated calls are cheap.
class Functional {
 public:
  Functional(Params p, GridPtr grid);

  const Params& params() const { return p_; }
  const ClampedOperator& op() const { return op_; }
  const GridPtr& grid() const { return op_.grid(); }
  double p_crit() const { return pc_; }

  FiberScalars scalars(const RadialFunction& u) const;
  double energy(const RadialFunction& u) const;
  // I(v) - I(u) by Gauss quadrature of the derivative along the segment;
  // free of the cancellation in energy(v) - energy(u) when v is close to u.
  double energy_difference(const RadialFunction& u, const RadialFunction& v) const;
  // Nodal nonlinearity lambda u + mu u ln u^2 + |u|^{2**-2} u.
  std::vector<double> nonlinearity(const RadialFunction& u) const;
  // Discrete derivative: dI/du_j for the n-1 unknowns.
  std::vector<double> gradient(const RadialFunction& u) const;
  // <I'(u), phi>.
  double pairing(const RadialFunction& u, const RadialFunction& phi) const;
  Residual residual(const RadialFunction& u) const;
  // <I'(u), u>.
  double nehari_gap(const RadialFunction& u) const;

  double fibering(const RadialFunction& u, double t) const;
  std::pair<double, double> fibering_derivs(const RadialFunction& u, double t) const;
  FiberingReport nehari_project(const RadialFunction& u) const;
  // t(u) u.
  RadialFunction project(const RadialFunction& u) const;

 private:
  void check(const RadialFunction& u) const;
  Params p_;
  ClampedOperator op_;
  double pc_;
};

// Convenience forms that build a Functional on u's grid.
double energy(const RadialFunction& u, const Params& p);
Residual residual(const RadialFunction& u, const Params& p);
double fibering(const RadialFunction& u, const Params& p, double t);
std::pair<double, double> fibering_derivs(const RadialFunction& u, const Params& p, double t);
FiberingReport nehari_project(const RadialFunction& u, const Params& p);

// RHS minus LHS of the logarithmic Sobolev bound
//   int u^2 ln u^2 <= a^2/(pi lt) |Delta u|^2 + (ln|u|_2^2 - N(1 + ln a)) |u|_2^2,
// with lt the first Dirichlet eigenvalue of -Delta.
double log_sobolev_gap(const RadialFunction& u, int N, double a, double lambda1_lap);

// |Delta u|_2^2 / lt - |grad u|_2^2, the Poincare step behind the bound above.
double poincare_gap(const RadialFunction& u, int N, double lambda1_lap);

struct InequalityCheck {
  std::string name;
  double max_excess = 0.0;  // max over the grid of lhs - rhs; must be <= 0
  double argmax = 0.0;      // refined location of the extremum of lhs
  double expected_argmax = 0.0;
  bool holds = false;
};

// Dense log-grid checks of |t ln t| <= 1/e on (0,1], ln t / t^s <= 1/(s e),
// and |ln t| <= C (t^a + t^-d) with C = 1/(e min(a, d)).
std::vector<InequalityCheck> elementary_inequalities(int points = 1000000);

}  // namespace logplate
