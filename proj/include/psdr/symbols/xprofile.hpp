// SPDX-License-Identifier: Apache-2.0
//
// Scalar coefficient profiles in the space variable. All profiles settle to a
// radial limit as |x| -> infinity (the zero-order classical condition in x)
// and provide analytic derivatives of every order.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "psdr/core/anisotropy.hpp"

namespace psdr {

class XProfile;
using XProfilePtr = std::shared_ptr<const XProfile>;

class XProfile {
 public:
  virtual ~XProfile() = default;
  virtual double eval(const Eigen::VectorXd& x) const = 0;
  /// partial_x^alpha at x (alpha = 0 reproduces eval)
  virtual double deriv(const MultiIndex& alpha, const Eigen::VectorXd& x) const = 0;
  /// radial limit as |x| -> infinity
  virtual double limit_infinity() const = 0;
  virtual bool is_constant() const { return false; }
  virtual bool is_zero() const { return false; }
};

class ConstantProfile final : public XProfile {
 public:
  explicit ConstantProfile(double c) : c_(c) {}
  double eval(const Eigen::VectorXd&) const override { return c_; }
  double deriv(const MultiIndex& alpha, const Eigen::VectorXd& x) const override {
    return alpha.order() == 0 ? c_ : 0.0;
  }
  double limit_infinity() const override { return c_; }
  bool is_constant() const override { return true; }
  bool is_zero() const override { return c_ == 0.0; }

 private:
  double c_;
};

/// g(x) = limit + amplitude * exp(-|x|^2 / width^2); derivatives via the
/// Hermite product formula d^n/dt^n e^{-(t/w)^2} = (-1/w)^n H_n(t/w) e^{-(t/w)^2}.
class GaussianBumpProfile final : public XProfile {
 public:
  GaussianBumpProfile(double limit, double amplitude, double width)
      : limit_(limit), amplitude_(amplitude), width_(width) {
    if (!(width > 0.0)) throw std::invalid_argument("GaussianBumpProfile: width must be positive");
  }

  double eval(const Eigen::VectorXd& x) const override {
    return limit_ + amplitude_ * std::exp(-x.squaredNorm() / (width_ * width_));
  }

  double deriv(const MultiIndex& alpha, const Eigen::VectorXd& x) const override {
    if (alpha.order() == 0) return eval(x);
    double f = amplitude_;
    for (int j = 0; j < alpha.dim(); ++j) {
      const double u = x[j] / width_;
      f *= std::pow(-1.0 / width_, alpha[j]) * hermite(alpha[j], u) * std::exp(-u * u);
    }
    return f;
  }

  double limit_infinity() const override { return limit_; }

 private:
  static double hermite(int n, double u) {
    double h0 = 1.0;
    if (n == 0) return h0;
    double h1 = 2.0 * u;
    for (int k = 1; k < n; ++k) {
      const double h2 = 2.0 * u * h1 - 2.0 * k * h0;
      h0 = h1;
      h1 = h2;
    }
    return h1;
  }

  double limit_, amplitude_, width_;
};

class DerivativeProfile final : public XProfile {
 public:
  DerivativeProfile(XProfilePtr base, MultiIndex alpha)
      : base_(std::move(base)), alpha_(std::move(alpha)) {}
  double eval(const Eigen::VectorXd& x) const override { return base_->deriv(alpha_, x); }
  double deriv(const MultiIndex& beta, const Eigen::VectorXd& x) const override {
    return base_->deriv(alpha_ + beta, x);
  }
  double limit_infinity() const override {
    return alpha_.order() == 0 ? base_->limit_infinity() : 0.0;
  }
  bool is_zero() const override { return base_->is_constant() && alpha_.order() > 0; }

 private:
  XProfilePtr base_;
  MultiIndex alpha_;
};

class ProductProfile final : public XProfile {
 public:
  ProductProfile(XProfilePtr a, XProfilePtr b) : a_(std::move(a)), b_(std::move(b)) {}
  double eval(const Eigen::VectorXd& x) const override { return a_->eval(x) * b_->eval(x); }
  double deriv(const MultiIndex& alpha, const Eigen::VectorXd& x) const override {
    if (alpha.order() == 0) return eval(x);
    // Leibniz over beta <= alpha
    double acc = 0.0;
    for (const auto& beta : enumerate_leq(alpha))
      acc += binom(alpha, beta) * a_->deriv(beta, x) * b_->deriv(subtract(alpha, beta), x);
    return acc;
  }
  double limit_infinity() const override { return a_->limit_infinity() * b_->limit_infinity(); }
  bool is_zero() const override { return a_->is_zero() || b_->is_zero(); }

 private:
  static std::vector<MultiIndex> enumerate_leq(const MultiIndex& alpha) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(alpha.dim(), 0);
    enumerate(alpha, 0, cur, out);
    return out;
  }
  static void enumerate(const MultiIndex& alpha, int pos, std::vector<int>& cur,
                        std::vector<MultiIndex>& out) {
    if (pos == alpha.dim()) {
      out.push_back(MultiIndex(cur));
      return;
    }
    for (int k = 0; k <= alpha[pos]; ++k) {
      cur[pos] = k;
      enumerate(alpha, pos + 1, cur, out);
    }
  }
  static MultiIndex subtract(const MultiIndex& a, const MultiIndex& b) {
    std::vector<int> e(a.dim());
    for (int j = 0; j < a.dim(); ++j) e[j] = a[j] - b[j];
    return MultiIndex(std::move(e));
  }
  static double binom(const MultiIndex& a, const MultiIndex& b) {
    double r = 1.0;
    for (int j = 0; j < a.dim(); ++j) {
      double c = 1.0;
      for (int k = 0; k < b[j]; ++k) c = c * (a[j] - k) / (k + 1);
      r *= c;
    }
    return r;
  }

  XProfilePtr a_, b_;
};

inline XProfilePtr constant_profile(double c) { return std::make_shared<ConstantProfile>(c); }
inline XProfilePtr gaussian_bump_profile(double limit, double amplitude, double width) {
  return std::make_shared<GaussianBumpProfile>(limit, amplitude, width);
}
inline XProfilePtr derivative_profile(XProfilePtr base, MultiIndex alpha) {
  if (alpha.order() == 0) return base;
  return std::make_shared<DerivativeProfile>(std::move(base), std::move(alpha));
}
inline XProfilePtr product_profile(XProfilePtr a, XProfilePtr b) {
  return std::make_shared<ProductProfile>(std::move(a), std::move(b));
}

}  // namespace psdr
