#pragma once

#include <span>
#include <vector>

namespace logplate {

// Symmetric banded matrix stored by diagonals: diag(k)[i] = A(i, i + k).
class SymBandMatrix {
 public:
  SymBandMatrix(int n, int bandwidth);

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

  double& at(int i, int k) { return diag_[k][i]; }
  double at(int i, int k) const { return diag_[k][i]; }
  // Full-index access; zero outside the band.
  double operator()(int i, int j) const;

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  int n_;
  int bw_;
  std::vector<std::vector<double>> diag_;
};

// Banded LDL^T factorisation of a symmetric positive definite matrix.
class BandLDLT {
 public:
  // Throws NumericalError on a non-positive pivot.
  explicit BandLDLT(const SymBandMatrix& a);

  std::vector<double> solve(std::span<const double> b) const;
  int size() const { return n_; }

 private:
  int n_;
  int bw_;
  std::vector<double> d_;
  std::vector<std::vector<double>> l_;  // l_[k][i] = L(i + k, i)
};

}  // namespace logplate
