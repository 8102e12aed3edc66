// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <complex>
#include <stdexcept>

namespace psdr {

/// Spectral (l2 -> l2) operator norm: largest singular value.
inline double operator_norm_2(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  if (a.rows() > 32 || a.cols() > 32)
    return Eigen::BDCSVD<Eigen::MatrixXcd>(a).singularValues()(0);
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues()(0);
}

inline Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: square matrix required");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver failed");
  return es.eigenvalues();
}

/// 2-norm condition number.
inline double condition_number(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / (s(s.size() - 1));
}

/// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ls_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace psdr
