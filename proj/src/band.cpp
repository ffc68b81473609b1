#include "logplate/band.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logplate/error.hpp"

namespace logplate {

SymBandMatrix::SymBandMatrix(int n, int bandwidth)
    : n_(n), bw_(bandwidth), diag_(bandwidth + 1, std::vector<double>(n, 0.0)) {
  if (n < 1 || bandwidth < 0) throw InvalidArgument("SymBandMatrix: bad shape");
}

double SymBandMatrix::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  const int k = j - i;
  return k > bw_ ? 0.0 : diag_[k][i];
}

std::vector<double> SymBandMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    y[i] += diag_[0][i] * x[i];
    for (int k = 1; k <= bw_ && i + k < n_; ++k) {
      y[i] += diag_[k][i] * x[i + k];
      y[i + k] += diag_[k][i] * x[i];
    }
  }
  return y;
}

BandLDLT::BandLDLT(const SymBandMatrix& a)
    : n_(a.size()), bw_(a.bandwidth()), d_(a.size()), l_(a.bandwidth() + 1, std::vector<double>(a.size(), 0.0)) {
  auto L = [&](int i, int j) -> double& { return l_[i - j][j]; };
  for (int j = 0; j < n_; ++j) {
    double dj = a.at(j, 0);
    for (int k = std::max(0, j - bw_); k < j; ++k) dj -= L(j, k) * L(j, k) * d_[k];
    if (!(dj > 0.0) || !std::isfinite(dj))
      throw NumericalError("BandLDLT: non-positive pivot at row " + std::to_string(j));
    d_[j] = dj;
    L(j, j) = 1.0;
    for (int i = j + 1; i <= std::min(n_ - 1, j + bw_); ++i) {
      double v = a.at(j, i - j);
      for (int k = std::max(0, i - bw_); k < j; ++k) v -= L(i, k) * L(j, k) * d_[k];
      L(i, j) = v / dj;
    }
  }
}

std::vector<double> BandLDLT::solve(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != n_) throw InvalidArgument("BandLDLT::solve: size mismatch");
  std::vector<double> x(b.begin(), b.end());
  for (int i = 0; i < n_; ++i)
    for (int k = 1; k <= bw_ && i - k >= 0; ++k) x[i] -= l_[k][i - k] * x[i - k];
  for (int i = 0; i < n_; ++i) x[i] /= d_[i];
  for (int i = n_ - 1; i >= 0; --i)
    for (int k = 1; k <= bw_ && i + k < n_; ++k) x[i] -= l_[k][i] * x[i + k];
  return x;
}

}  // namespace logplate
