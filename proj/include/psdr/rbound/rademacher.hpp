// SPDX-License-Identifier: Apache-2.0
//
// Randomized-sum means over sign patterns. The quantity
//   S_p(v_1..v_N) = ( sum_{eps in {-1,1}^N} || sum_j eps_j v_j ||^p )^{1/p}
// is enumerated exactly via a Gray-code walk (one sign flip per step), or
// sampled by Monte Carlo beyond the enumeration cap.

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "psdr/core/random.hpp"
#include "psdr/core/spaces.hpp"

namespace psdr {

inline constexpr int kSignEnumerationCap = 20;  // 2^20 patterns

namespace detail {
// x^p; multiplication for small integer p keeps power-of-two scalings of the
// inputs exactly equivariant
inline double pow_p(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  if (p == 3.0) return x * x * x;
  if (p == 4.0) return (x * x) * (x * x);
  return std::pow(x, p);
}
inline double root_p(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return std::sqrt(x);
  return std::pow(x, 1.0 / p);
}
}  // namespace detail

/// Exact p-th mean over all 2^N sign patterns.
inline double signed_sum_pmean(const std::vector<Eigen::VectorXcd>& v, double p,
                               const NormedSpace& space) {
  const int n = static_cast<int>(v.size());
  if (n == 0) throw std::invalid_argument("signed_sum_pmean: empty tuple");
  if (n > kSignEnumerationCap) throw std::invalid_argument("signed_sum_pmean: tuple too large for enumeration");
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(space.dim);
  for (const auto& x : v) s += x;
  double acc = detail::pow_p(space.norm(s), p);
  const std::uint64_t count = 1ULL << n;
  for (std::uint64_t i = 1; i < count; ++i) {
    const int b = std::countr_zero(i);           // Gray-code flip position
    const std::uint64_t g = i ^ (i >> 1);
    const double sign = (g >> b) & 1ULL ? -1.0 : 1.0;  // new sign of slot b
    s += 2.0 * sign * v[b];
    acc += detail::pow_p(space.norm(s), p);
  }
  return detail::root_p(acc, p);
}

/// Monte-Carlo estimate of the same quantity (2^N * average over sampled
/// patterns)^{1/p}; used only when N exceeds the enumeration cap.
inline double signed_sum_pmean_mc(const std::vector<Eigen::VectorXcd>& v, double p,
                                  const NormedSpace& space, int n_samples, RandomStream& rng) {
  const int n = static_cast<int>(v.size());
  if (n == 0) throw std::invalid_argument("signed_sum_pmean_mc: empty tuple");
  if (n_samples < 1) throw std::invalid_argument("signed_sum_pmean_mc: need samples");
  double acc = 0.0;
  Eigen::VectorXcd s(space.dim);
  for (int k = 0; k < n_samples; ++k) {
    s.setZero();
    for (int j = 0; j < n; ++j) s += (rng.uniform() < 0.5 ? -1.0 : 1.0) * v[j];
    acc += detail::pow_p(space.norm(s), p);
  }
  const double total = std::ldexp(acc / n_samples, n);  // 2^n * mean
  return detail::root_p(total, p);
}

/// The Rademacher ratio
///   S_p(T_1 x_1, ..., T_N x_N) / S_p(x_1, ..., x_N)
/// whose supremum over all choices defines the R-bound.
inline double rademacher_functional(const std::vector<Eigen::MatrixXcd>& T_choice,
                                    const std::vector<Eigen::VectorXcd>& x_choice, double p,
                                    const NormedSpace& X, const NormedSpace& Y) {
  if (T_choice.size() != x_choice.size() || T_choice.empty())
    throw std::invalid_argument("rademacher_functional: tuple sizes must match and be >= 1");
  if (static_cast<int>(T_choice.size()) > kSignEnumerationCap)
    throw std::invalid_argument("rademacher_functional: tuple too large for enumeration");
  std::vector<Eigen::VectorXcd> w(T_choice.size());
  for (std::size_t j = 0; j < T_choice.size(); ++j) {
    if (T_choice[j].cols() != x_choice[j].size())
      throw std::invalid_argument("rademacher_functional: shape mismatch");
    w[j] = T_choice[j] * x_choice[j];
  }
  const double den = signed_sum_pmean(x_choice, p, X);
  if (den <= 0.0) throw std::invalid_argument("rademacher_functional: zero denominator");
  return signed_sum_pmean(w, p, Y) / den;
}

}  // namespace psdr
