// SPDX-License-Identifier: Apache-2.0
//
// Empirical verification of the classical randomized-sum inequalities:
// Kahane's p/q equivalence, the contraction principle, Pisier's property
// (alpha), and sub-additivity / sub-multiplicativity of R-bounds.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "psdr/core/random.hpp"
#include "psdr/core/spaces.hpp"
#include "psdr/rbound/estimate.hpp"
#include "psdr/rbound/rademacher.hpp"

namespace psdr {

// ---------------------------------------------------------------------------

struct KahaneReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  long trials = 0;
  bool finite_positive = false;
};

/// Ratio of normalized p-mean to q-mean, (2^{-N} sum ||.||^p)^{1/p} over
/// (2^{-N} sum ||.||^q)^{1/q}, across random vector tuples.
inline KahaneReport kahane_equivalence_check(double p, double q, int trials,
                                             const BanachSpaceSpec& space, int n_max,
                                             std::uint64_t seed) {
  if (p < 1.0 || q < 1.0 || trials < 1) throw std::invalid_argument("kahane_equivalence_check: bad arguments");
  if (n_max < 1 || n_max > kSignEnumerationCap) throw std::invalid_argument("kahane_equivalence_check: bad n_max");
  KahaneReport rep;
  rep.trials = trials;
  const NormedSpace ns = NormedSpace::from(space);
  RandomStream root(seed);
  bool first = true;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng = root.child(static_cast<std::uint64_t>(t));
    const int n = rng.uniform_int(1, n_max);
    std::vector<Eigen::VectorXcd> x(n);
    for (auto& v : x) v = rng.normal_complex_vector(space.dim);
    const double mp = signed_sum_pmean(x, p, ns) * std::pow(std::ldexp(1.0, -n), 1.0 / p);
    const double mq = signed_sum_pmean(x, q, ns) * std::pow(std::ldexp(1.0, -n), 1.0 / q);
    if (mq <= 0.0) continue;
    const double ratio = mp / mq;
    if (first) {
      rep.min_ratio = rep.max_ratio = ratio;
      first = false;
    } else {
      rep.min_ratio = std::min(rep.min_ratio, ratio);
      rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
  }
  rep.finite_positive = rep.min_ratio > 0.0 && std::isfinite(rep.max_ratio);
  return rep;
}

// ---------------------------------------------------------------------------

struct ContractionReport {
  double ratio = 0.0;  // lhs / rhs
  bool pass = false;
};

/// Verifies the factor-2 contraction inequality for |alpha_j| <= |beta_j|:
/// the p-mean with alpha coefficients is at most twice the one with beta.
inline ContractionReport contraction_check(const std::vector<cplx>& alpha,
                                           const std::vector<cplx>& beta,
                                           const std::vector<Eigen::VectorXcd>& x, double p,
                                           const BanachSpaceSpec& space) {
  if (alpha.size() != beta.size() || alpha.size() != x.size() || x.empty())
    throw std::invalid_argument("contraction_check: size mismatch");
  for (std::size_t j = 0; j < alpha.size(); ++j)
    if (std::abs(alpha[j]) > std::abs(beta[j]) * (1.0 + 1e-12))
      throw std::invalid_argument("contraction_check: requires |alpha_j| <= |beta_j|");
  const NormedSpace ns = NormedSpace::from(space);
  std::vector<Eigen::VectorXcd> ax(x.size()), bx(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    ax[j] = alpha[j] * x[j];
    bx[j] = beta[j] * x[j];
  }
  const double lhs = signed_sum_pmean(ax, p, ns);
  const double rhs = signed_sum_pmean(bx, p, ns);
  ContractionReport rep;
  if (rhs <= 0.0) {
    // all beta_j x_j = 0 forces alpha_j x_j = 0
    rep.ratio = 0.0;
    rep.pass = lhs <= 1e-300;
    return rep;
  }
  rep.ratio = lhs / rhs;
  rep.pass = lhs <= 2.0 * rhs * (1.0 + 1e-12);
  return rep;
}

// ---------------------------------------------------------------------------

struct PropertyAlphaReport {
  double max_ratio = 0.0;
  long trials = 0;
};

/// Empirical lower bound for the property-(alpha) constant: the double
/// Rademacher ratio over random x_{jk} and signs alpha_{jk} in {-1,1},
/// enumerated exactly over both sign vectors (4^N patterns).
inline PropertyAlphaReport property_alpha_check(const BanachSpaceSpec& space, int n, int trials,
                                                double p, std::uint64_t seed) {
  if (n < 1 || n > 8) throw std::invalid_argument("property_alpha_check: enumeration is 4^N, need 1 <= N <= 8");
  if (trials < 1) throw std::invalid_argument("property_alpha_check: trials >= 1");
  PropertyAlphaReport rep;
  rep.trials = trials;
  const NormedSpace ns = NormedSpace::from(space);
  RandomStream root(seed);
  const std::uint64_t count = 1ULL << n;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng = root.child(static_cast<std::uint64_t>(t));
    std::vector<std::vector<Eigen::VectorXcd>> x(n, std::vector<Eigen::VectorXcd>(n));
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        x[j][k] = rng.normal_complex_vector(space.dim);
        a[j][k] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      }
    double num = 0.0, den = 0.0;
    std::vector<double> eps(n, 1.0);
    for (std::uint64_t i = 0; i < count; ++i) {
      if (i > 0) {
        const int b = std::countr_zero(i);
        const std::uint64_t g = i ^ (i >> 1);
        eps[b] = (g >> b) & 1ULL ? -1.0 : 1.0;
      }
      // row-collapsed sums y_k = sum_j eps_j {a_jk} x_jk for both numerator and denominator
      std::vector<Eigen::VectorXcd> ya(n, Eigen::VectorXcd::Zero(space.dim));
      std::vector<Eigen::VectorXcd> y1(n, Eigen::VectorXcd::Zero(space.dim));
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
          ya[k] += eps[j] * a[j][k] * x[j][k];
          y1[k] += eps[j] * x[j][k];
        }
      num += detail::pow_p(signed_sum_pmean(ya, p, ns), p);
      den += detail::pow_p(signed_sum_pmean(y1, p, ns), p);
    }
    if (den <= 0.0) continue;
    rep.max_ratio = std::max(rep.max_ratio, detail::root_p(num / den, p));
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct RBoundAlgebraReport {
  RBoundEstimate r_T, r_S, r_sum, r_prod;
  bool subadditive_ok = false;
  bool submultiplicative_ok = false;
};

/// Estimates R(T), R(S), R(T+S) (pairwise sums), R(TS) (pairwise products)
/// and checks R(T+S) <= R(T) + R(S), R(TS) <= R(T) R(S). The right-hand
/// sides use the oracle/cap values when available.
inline RBoundAlgebraReport rbound_algebra_check(const std::vector<Eigen::MatrixXcd>& T,
                                                const std::vector<Eigen::MatrixXcd>& S,
                                                const BanachSpaceSpec& X, const BanachSpaceSpec& Y,
                                                double p, const RBoundBudget& budget,
                                                double tolerance = 1e-9) {
  if (T.empty() || S.empty()) throw std::invalid_argument("rbound_algebra_check: empty family");
  if (T.front().rows() != S.front().rows() || T.front().cols() != S.front().cols())
    throw std::invalid_argument("rbound_algebra_check: sum requires identical shapes");
  if (T.front().cols() != S.front().rows())
    throw std::invalid_argument("rbound_algebra_check: product requires composable shapes");

  std::vector<Eigen::MatrixXcd> sums, prods;
  for (const auto& a : T)
    for (const auto& b : S) {
      sums.push_back(a + b);
      prods.push_back(a * b);
    }

  RBoundAlgebraReport rep;
  RBoundBudget b = budget;
  rep.r_T = rbound_estimate(T, X, Y, p, b);
  b.seed = splitmix64(budget.seed ^ 0x53);
  rep.r_S = rbound_estimate(S, X, Y, p, b);
  b.seed = splitmix64(budget.seed ^ 0x2b);
  rep.r_sum = rbound_estimate(sums, X, Y, p, b);
  b.seed = splitmix64(budget.seed ^ 0x2a);
  rep.r_prod = rbound_estimate(prods, X, Y, p, b);

  const double ub_T = rep.r_T.upper.value_or(rep.r_T.value);
  const double ub_S = rep.r_S.upper.value_or(rep.r_S.value);
  rep.subadditive_ok = rep.r_sum.value <= ub_T + ub_S + tolerance;
  rep.submultiplicative_ok = rep.r_prod.value <= ub_T * ub_S + tolerance;
  return rep;
}

}  // namespace psdr
