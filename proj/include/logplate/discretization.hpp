#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "logplate/band.hpp"

namespace logplate {

class RadialGrid {
 public:
  // r_j = j R / (n - 1).
  static RadialGrid uniform(double R, int n);
  // r_j = R sinh(c s_j) / sinh(c) with s_j = j / (n - 1); clusters nodes at 0.
  static RadialGrid graded(double R, int n, double c);

  double R() const { return nodes_.back(); }
  int size() const { return static_cast<int>(nodes_.size()); }
  double operator[](int j) const { return nodes_[j]; }
  std::span<const double> nodes() const { return nodes_; }
  bool is_uniform() const { return c_ == 0.0; }
  double grading() const { return c_; }

  // q_j with sum_j q_j g(r_j) approximating the integral of g over [0, R];
  // fourth-order Gregory rule in the (possibly mapped) uniform variable.
  std::span<const double> line_weights() const { return line_; }
  // w_j with sum_j w_j f(r_j) approximating the integral of f over B_R in R^N.
  std::vector<double> ball_weights(int N) const;

  // Same kind of grid with 2n - 1 nodes; the old nodes are every other node.
  RadialGrid refined() const;

 private:
  RadialGrid(std::vector<double> nodes, std::vector<double> line, double c);
  std::vector<double> nodes_;
  std::vector<double> line_;
  double c_ = 0.0;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

struct RadialFunction {
  GridPtr grid;
  std::vector<double> values;

  RadialFunction() = default;
  RadialFunction(GridPtr g, std::vector<double> v);
  static RadialFunction zeros(GridPtr g);
  static RadialFunction sample(GridPtr g, const std::function<double(double)>& f);

  int size() const { return static_cast<int>(values.size()); }
  double operator[](int j) const { return values[j]; }
};

GridPtr make_uniform(double R, int n);

enum class OuterClosure {
  kOneSided,  // one-sided cubic stencil at r = R, valid for any u
  kClamped,   // mirror ghost u(R + h) = u(R - h), valid for u(R) = u'(R) = 0
};

RadialFunction laplacian_radial(const RadialFunction& u, int N,
                                OuterClosure closure = OuterClosure::kOneSided);
// u' with u'(0) = 0 by evenness.
RadialFunction gradient_radial(const RadialFunction& u);
double quad_ball(const RadialFunction& f, int N);
// sqrt of the ball integral of |Delta u|^2, clamped closure at R.
double h2_norm(const RadialFunction& u, int N);
// Ball integral of (u')^2.
double dirichlet_energy(const RadialFunction& u, int N);
// Strong-form Delta^2 u for clamped u.
RadialFunction bilaplacian_strong(const RadialFunction& u, int N);

// Sets u(R) = 0; u'(R) = 0 enters through the operator's mirror ghost.
void enforce_clamp(RadialFunction& u);

// Clamped discrete bilaplacian. The unknowns are the values at nodes 0..n-2;
// u(R) = 0 is built in and u'(R) = 0 enters through the mirror ghost
// u(R + h) = u(R - h) in the Laplacian row at R. With L mapping the unknowns
// to all n nodal Laplacians, the stiffness matrix is A = L^T Ws L, Ws the
// trapezoid ball weights.
class ClampedOperator {
 public:
  ClampedOperator(GridPtr grid, int N);

  const GridPtr& grid() const { return grid_; }
  int N() const { return N_; }
  int nodes() const { return grid_->size(); }
  int unknowns() const { return grid_->size() - 1; }
  std::span<const double> weights() const { return w_; }
  std::span<const double> trapezoid_weights() const { return ws_; }
  const SymBandMatrix& stiffness() const { return A_; }

  // True when u has n entries and u(R) = 0.
  bool is_clamped(std::span<const double> u) const;
  // Discrete Laplacian at every node from the unknowns of u (n entries).
  std::vector<double> laplacian(std::span<const double> u) const;
  // L^T W L u, evaluated factor by factor; much less rounding than
  // stiffness().multiply on fine grids.
  std::vector<double> apply(std::span<const double> u) const;
  // Sum of ws_i (Lu)_i^2.
  double h2(std::span<const double> u) const;
  // W f restricted to the unknowns.
  std::vector<double> load(std::span<const double> f) const;
  // Solves A x = b for b over the unknowns; returns n values with x[n-1] = 0.
  std::vector<double> solve(std::span<const double> b) const;
  // Solves A x = load(f).
  std::vector<double> solve_load(std::span<const double> f) const;

 private:
  struct FreeRow {
    int first = 0;
    int len = 0;
    std::array<double, 3> c{};
  };
  GridPtr grid_;
  int N_;
  std::vector<double> w_;
  std::vector<double> ws_;
  std::vector<FreeRow> rows_;
  SymBandMatrix A_;
  std::unique_ptr<BandLDLT> factor_;
};

RadialFunction biharmonic_solve(const RadialFunction& f, int N);

struct EigenPair {
  double value;
  RadialFunction vector;  // normalised to unit weighted L2 norm, positive at 0
  int iterations;
};

EigenPair first_eigenpair_clamped(GridPtr grid, int N);
double first_eigen_clamped(const RadialGrid& grid, int N);
EigenPair first_eigenpair_laplace(GridPtr grid, int N);
double first_eigen_laplace(const RadialGrid& grid, int N);

// Local cubic interpolation onto another grid over the same interval.
RadialFunction interpolate(const RadialFunction& u, GridPtr target);

}  // namespace logplate
