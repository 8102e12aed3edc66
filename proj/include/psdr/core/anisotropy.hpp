// SPDX-License-Identifier: Apache-2.0
//
// Anisotropic weight functions and multi-index arithmetic.
//
// A vector of positive integer weights l = (l_1,...,l_n) assigns each axis a
// dilation exponent. It induces the absolute value |.|_l, the regularized
// bracket <.>_l, and the weighted multi-index length |beta|_l used throughout
// the symbol calculus.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace psdr {

// ---------------------------------------------------------------------------
// MultiIndex

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_)
      if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
  }
  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }
  static MultiIndex unit(int n, int axis, int k = 1) {
    std::vector<int> e(n, 0);
    e.at(axis) = k;
    return MultiIndex(std::move(e));
  }

  int dim() const { return static_cast<int>(entries_.size()); }
  int operator[](int j) const { return entries_[j]; }
  const std::vector<int>& entries() const { return entries_; }

  // |beta| = sum of entries
  int order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

  bool is_zero() const { return order() == 0; }

  MultiIndex operator+(const MultiIndex& o) const {
    check_dim(o.dim());
    std::vector<int> e(entries_);
    for (int j = 0; j < dim(); ++j) e[j] += o[j];
    return MultiIndex(std::move(e));
  }

  // componentwise beta <= alpha
  bool leq(const MultiIndex& alpha) const {
    check_dim(alpha.dim());
    for (int j = 0; j < dim(); ++j)
      if (entries_[j] > alpha[j]) return false;
    return true;
  }

  double factorial() const {
    double f = 1.0;
    for (int e : entries_)
      for (int k = 2; k <= e; ++k) f *= k;
    return f;
  }

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }

  std::string str() const {
    std::string s = "(";
    for (int j = 0; j < dim(); ++j) s += (j ? "," : "") + std::to_string(entries_[j]);
    return s + ")";
  }

  // All multi-indices in n variables with |alpha| <= max_order, graded order.
  static std::vector<MultiIndex> all_up_to(int n, int max_order) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(n, 0);
    for (int total = 0; total <= max_order; ++total) enumerate_fixed(n, total, 0, cur, out);
    return out;
  }

 private:
  static void enumerate_fixed(int n, int remaining, int pos, std::vector<int>& cur,
                              std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
      cur[pos] = remaining;
      out.push_back(MultiIndex(cur));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      cur[pos] = k;
      enumerate_fixed(n, remaining - k, pos + 1, cur, out);
    }
  }
  void check_dim(int n) const {
    if (n != dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  }

  std::vector<int> entries_;
};

// ---------------------------------------------------------------------------
// AnisotropyVector

class AnisotropyVector {
 public:
  explicit AnisotropyVector(std::vector<int> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("AnisotropyVector: empty");
    for (int e : entries_)
      if (e < 1) throw std::invalid_argument("AnisotropyVector: entries must be >= 1");
    total_ = 1;
    for (int e : entries_) total_ *= e;
    pi_.resize(entries_.size());
    for (std::size_t j = 0; j < entries_.size(); ++j) pi_[j] = total_ / entries_[j];
  }

  static AnisotropyVector isotropic(int n) {
    return AnisotropyVector(std::vector<int>(n, 1));
  }

  int dim() const { return static_cast<int>(entries_.size()); }
  int operator[](int j) const { return entries_[j]; }
  const std::vector<int>& entries() const { return entries_; }

  // pi_j = prod_{i != j} l_i
  long long pi(int j) const { return pi_[j]; }
  // L = l_1 ... l_n
  long long total() const { return total_; }
  int sum() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }
  int max_entry() const { return *std::max_element(entries_.begin(), entries_.end()); }
  int min_entry() const { return *std::min_element(entries_.begin(), entries_.end()); }

  bool is_isotropic() const { return max_entry() == 1; }

  // Anisotropic dilation: (xi_j) -> (rho^{l_j} xi_j)
  Eigen::VectorXd dilate(const Eigen::VectorXd& xi, double rho) const {
    check_dim(static_cast<int>(xi.size()));
    Eigen::VectorXd out(xi.size());
    for (int j = 0; j < xi.size(); ++j) out[j] = std::pow(rho, entries_[j]) * xi[j];
    return out;
  }

  bool operator==(const AnisotropyVector& o) const { return entries_ == o.entries_; }

  void check_dim(int n) const {
    if (n != dim()) throw std::invalid_argument("AnisotropyVector: dimension mismatch");
  }

 private:
  std::vector<int> entries_;
  std::vector<long long> pi_;
  long long total_ = 1;
};

// ---------------------------------------------------------------------------
// Weights
//
// |xi|_l = (sum_j xi_j^{2 pi_j})^{1/(2L)},  <xi>_l = (1 + sum_j xi_j^{2 pi_j})^{1/(2L)}.
// The even exponent makes |xi_j| and xi_j interchangeable; we use |xi_j| so the
// log-space branch is well defined.

namespace detail {

// true if any coordinate forces the log-sum-exp evaluation
inline bool needs_log_path(const Eigen::VectorXd& xi, const AnisotropyVector& ell) {
  for (int j = 0; j < xi.size(); ++j)
    if (std::abs(xi[j]) > 1e3 || ell.pi(j) > 8) return true;
  return false;
}

// returns log(extra + sum_j |xi_j|^{2 pi_j}) with extra in {0, 1}
inline double log_power_sum(const Eigen::VectorXd& xi, const AnisotropyVector& ell,
                            double extra) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  logs.reserve(xi.size() + 1);
  if (extra > 0.0) logs.push_back(std::log(extra));
  for (int j = 0; j < xi.size(); ++j) {
    const double a = std::abs(xi[j]);
    if (a > 0.0) logs.push_back(2.0 * static_cast<double>(ell.pi(j)) * std::log(a));
  }
  if (logs.empty()) return neg_inf;
  const double t = *std::max_element(logs.begin(), logs.end());
  double s = 0.0;
  for (double lg : logs) s += std::exp(lg - t);
  return t + std::log(s);
}

}  // namespace detail

/// |xi|_l; anisotropically 1-homogeneous: |dilate(xi, rho)|_l = rho |xi|_l.
inline double aniso_abs(const Eigen::VectorXd& xi, const AnisotropyVector& ell) {
  ell.check_dim(static_cast<int>(xi.size()));
  const double inv_exp = 1.0 / (2.0 * static_cast<double>(ell.total()));
  if (detail::needs_log_path(xi, ell)) {
    const double ls = detail::log_power_sum(xi, ell, 0.0);
    return std::isinf(ls) ? 0.0 : std::exp(inv_exp * ls);
  }
  double s = 0.0;
  for (int j = 0; j < xi.size(); ++j)
    s += std::pow(std::abs(xi[j]), 2.0 * static_cast<double>(ell.pi(j)));
  return std::pow(s, inv_exp);
}

/// <xi>_l >= 1; equals the standard bracket for l = (1,...,1).
inline double aniso_bracket(const Eigen::VectorXd& xi, const AnisotropyVector& ell) {
  ell.check_dim(static_cast<int>(xi.size()));
  const double inv_exp = 1.0 / (2.0 * static_cast<double>(ell.total()));
  if (detail::needs_log_path(xi, ell))
    return std::exp(inv_exp * detail::log_power_sum(xi, ell, 1.0));
  double s = 1.0;
  for (int j = 0; j < xi.size(); ++j)
    s += std::pow(std::abs(xi[j]), 2.0 * static_cast<double>(ell.pi(j)));
  return std::pow(s, inv_exp);
}

/// |beta|_l = sum_j l_j beta_j
inline long long aniso_length(const MultiIndex& beta, const AnisotropyVector& ell) {
  ell.check_dim(beta.dim());
  long long s = 0;
  for (int j = 0; j < beta.dim(); ++j) s += static_cast<long long>(ell[j]) * beta[j];
  return s;
}

/// Inverse dilation onto the anisotropic unit sphere: xi = dilate(dir, rho)
/// with rho = |xi|_l and |dir|_l = 1. Throws for xi = 0.
inline Eigen::VectorXd aniso_normalize(const Eigen::VectorXd& xi, const AnisotropyVector& ell,
                                       double* rho_out = nullptr) {
  const double rho = aniso_abs(xi, ell);
  if (rho <= 0.0) throw std::domain_error("aniso_normalize: zero vector");
  if (rho_out) *rho_out = rho;
  return ell.dilate(xi, 1.0 / rho);
}

// ---------------------------------------------------------------------------
// Empirical checks

struct PeetreReport {
  double max_ratio = 0.0;
  double bound = 0.0;  // 2^{|s|}
  long violations = 0;
  bool pass = false;
};

/// Checks <xi+xi'>_l^s <= 2^{|s|} <xi>_l^s <xi'>_l^{|s|} over the sample list.
inline PeetreReport peetre_check(double s,
                                 const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples,
                                 const AnisotropyVector& ell) {
  if (samples.empty()) throw std::invalid_argument("peetre_check: empty sample list");
  PeetreReport rep;
  rep.bound = std::pow(2.0, std::abs(s));
  for (const auto& [xi, eta] : samples) {
    const double lhs = std::pow(aniso_bracket(xi + eta, ell), s);
    const double rhs = std::pow(aniso_bracket(xi, ell), s) *
                       std::pow(aniso_bracket(eta, ell), std::abs(s));
    const double ratio = lhs / rhs;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > rep.bound * (1.0 + 1e-12)) ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

struct WeightEquivalenceReport {
  // extremes of <xi>_l / <xi>^{1/sum l_j} and <xi>_l / <xi>^{sum 1/l_j}
  double low_ratio_min = 0.0, low_ratio_max = 0.0;
  double high_ratio_min = 0.0, high_ratio_max = 0.0;
  bool finite_positive = false;
};

/// Empirical constants in c <xi>^{1/sum l_j} <= <xi>_l <= C <xi>^{sum 1/l_j}.
inline WeightEquivalenceReport weight_equivalence_check(const AnisotropyVector& ell,
                                                        const std::vector<Eigen::VectorXd>& samples) {
  if (samples.empty()) throw std::invalid_argument("weight_equivalence_check: empty samples");
  WeightEquivalenceReport rep;
  const AnisotropyVector iso = AnisotropyVector::isotropic(ell.dim());
  const double lo_exp = 1.0 / static_cast<double>(ell.sum());
  double hi_exp = 0.0;
  for (int j = 0; j < ell.dim(); ++j) hi_exp += 1.0 / static_cast<double>(ell[j]);
  bool first = true;
  for (const auto& xi : samples) {
    const double w = aniso_bracket(xi, ell);
    const double std_bracket = aniso_bracket(xi, iso);
    const double lo = w / std::pow(std_bracket, lo_exp);
    const double hi = w / std::pow(std_bracket, hi_exp);
    if (first) {
      rep.low_ratio_min = rep.low_ratio_max = lo;
      rep.high_ratio_min = rep.high_ratio_max = hi;
      first = false;
    } else {
      rep.low_ratio_min = std::min(rep.low_ratio_min, lo);
      rep.low_ratio_max = std::max(rep.low_ratio_max, lo);
      rep.high_ratio_min = std::min(rep.high_ratio_min, hi);
      rep.high_ratio_max = std::max(rep.high_ratio_max, hi);
    }
  }
  rep.finite_positive = rep.low_ratio_min > 0.0 && std::isfinite(rep.low_ratio_max) &&
                        rep.high_ratio_min > 0.0 && std::isfinite(rep.high_ratio_max);
  return rep;
}

}  // namespace psdr
