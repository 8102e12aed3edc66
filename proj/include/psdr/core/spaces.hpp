// SPDX-License-Identifier: Apache-2.0
//
// Finite-dimensional fiber spaces. Desk-scale stand-ins for the Banach spaces
// of the calculus: complex coordinate space carrying either the Euclidean or
// an l_p norm. Both kinds are of class (HT) and have property (alpha).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace psdr {

using cplx = std::complex<double>;

struct BanachSpaceSpec {
  enum class Kind { Euclidean, Lp };

  Kind kind = Kind::Euclidean;
  double p = 2.0;  // exponent for Lp kind, must be in (1, inf)
  int dim = 1;

  bool class_HT = true;
  bool property_alpha = true;

  static BanachSpaceSpec euclidean(int dim) { return {Kind::Euclidean, 2.0, dim}; }
  static BanachSpaceSpec lp(double p, int dim) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("BanachSpaceSpec: p must be in (1, inf)");
    return {Kind::Lp, p, dim};
  }

  double norm(const Eigen::VectorXcd& v) const {
    if (v.size() != dim) throw std::invalid_argument("BanachSpaceSpec::norm: dimension mismatch");
    if (kind == Kind::Euclidean) return v.norm();
    double s = 0.0;
    for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
    return std::pow(s, 1.0 / p);
  }

  bool is_hilbert() const { return kind == Kind::Euclidean; }

  std::string describe() const {
    return kind == Kind::Euclidean ? "euclidean(" + std::to_string(dim) + ")"
                                   : "l_" + std::to_string(p) + "(" + std::to_string(dim) + ")";
  }
};

/// A normed copy of C^D as seen by the Rademacher estimators. Grid function
/// spaces (discrete L_p with cell weights and a fiber norm) are expressed the
/// same way, so the estimators run unchanged on operators over grids.
struct NormedSpace {
  int dim = 1;
  std::function<double(const Eigen::VectorXcd&)> norm;
  bool hilbert = false;  // inner-product norm (possibly weighted)
  std::string description;

  static NormedSpace from(const BanachSpaceSpec& s) {
    return {s.dim, [s](const Eigen::VectorXcd& v) { return s.norm(v); }, s.is_hilbert(),
            s.describe()};
  }
};

}  // namespace psdr
