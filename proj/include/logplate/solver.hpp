#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logplate/constants.hpp"
#include "logplate/discretization.hpp"
#include "logplate/error.hpp"
#include "logplate/functional.hpp"

namespace logplate {

struct Solution {
  RadialFunction u;
  double energy = 0.0;
  double residual_norm = 0.0;
  double nehari_gap = 0.0;  // <I'(u), u>
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;
  std::string stop_reason;
};

struct SolverOptions {
  int grid_size = 2048;
  int max_iter = 10000;
  int path_points = 32;
};

// Thrown when a solver stops without meeting its tolerance; carries the
// last iterate.
class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, Solution partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const Solution& partial() const { return partial_; }

 private:
  Solution partial_;
};

// Steepest descent in the H_0^2 metric on the Nehari manifold (mu > 0):
// u <- t(|u - s G|) |u - s G| with Armijo backtracking on s.
Solution nehari_descent(const Params& p, std::uint64_t seed, double tol, const SolverOptions& opt = {});

// Path of opt.path_points points from 0 to a bump scaled until I < 0; the
// path maximum is refined, moved downhill and the path redistributed by
// H_0^2 arclength until the residual at the maximum drops below tol.
Solution mountain_pass(const Params& p, std::uint64_t seed, double tol, const SolverOptions& opt = {});

// The mountain-pass endpoint: the seeded bump scaled until I < 0.
RadialFunction mp_endpoint(const Functional& F, std::uint64_t seed);

struct Certificate {
  int fine_grid_size = 0;
  double energy_fine = 0.0;
  double residual_fine = 0.0;
  double drift = 0.0;  // relative energy change under refinement
  Branch branch = Branch::kNzero;
  double t_star = 0.0;  // Nehari projection factor of u; 1 on the manifold
  int positivity_violations = 0;
  double cS_slack = 0.0;  // c(S) - I(u)
  bool grid_polluted = false;
};

// Re-evaluates a converged solution on the refined grid. Throws
// InvalidArgument for unconverged or trivial input.
Certificate certify(const Solution& sol, const Params& p, const Constants& c);

}  // namespace logplate
