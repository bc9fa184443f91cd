#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "cherncat/errors.hpp"

namespace cherncat {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline bool is_finite(const Mat& m) {
  return m.allFinite();
}

inline void require_finite(const Mat& m, const char* what) {
  if (!is_finite(m)) throw DomainError(std::string(what) + ": non-finite entries");
}

/// Singular values of m, descending. Computed as the square roots of the
/// eigenvalues of m*m (clamped at zero); returns min(rows, cols) values.
inline RVec singular_values(const Mat& m) {
  require_finite(m, "singular_values");
  const Eigen::Index k = std::min(m.rows(), m.cols());
  if (k == 0) return RVec(0);
  // m*m is cols x cols; when rows < cols its spectrum is the singular values
  // squared padded with zeros, so keep the top k eigenvalues.
  Mat gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  RVec ev = es.eigenvalues();  // ascending, real for Hermitian input
  RVec out(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    double v = ev(ev.size() - 1 - i);
    out(i) = std::sqrt(std::max(0.0, v));
  }
  return out;
}

/// (sum_i s_i^p)^{1/p} for p >= 1.
inline double schatten_norm(const Mat& m, double p) {
  if (!(p >= 1.0)) throw DomainError("schatten_norm: p must be >= 1");
  RVec s = singular_values(m);
  if (s.size() == 0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
  return std::pow(acc, 1.0 / p);
}

/// Largest singular value; the p -> infinity limit of schatten_norm.
inline double operator_norm(const Mat& m) {
  RVec s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

}  // namespace cherncat
