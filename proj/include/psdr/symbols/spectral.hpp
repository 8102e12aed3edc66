// SPDX-License-Identifier: Apache-2.0
//
// Matrix-valued functions of the covariable/parameter block (xi, lambda) with
// derivative access, built as shared expression nodes. Derivatives are exact
// where the node structure allows (monomials, products, inverses) and fall
// back to Richardson-extrapolated centered differences with anisotropy-aware
// steps elsewhere. Axis convention: 0..d-1 are xi axes, d is Re(lambda),
// d+1 is Im(lambda).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "psdr/core/anisotropy.hpp"
#include "psdr/core/linalg.hpp"
#include "psdr/core/random.hpp"
#include "psdr/core/spaces.hpp"

namespace psdr {

class SpectralFn;
using SpectralFnPtr = std::shared_ptr<const SpectralFn>;

/// Tracks matrix inversions performed inside symbol evaluations.
struct ConditionLog {
  mutable std::mutex mu;
  mutable double max_cond = 0.0;
  mutable long inversions = 0;
  double threshold = 1e12;

  void record(double cond) const {
    std::lock_guard<std::mutex> lock(mu);
    max_cond = std::max(max_cond, cond);
    ++inversions;
  }
};

namespace detail {

inline std::uint64_t point_key(const Eigen::VectorXd& xi, cplx lambda) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < xi.size(); ++i) mix(xi[i]);
  mix(lambda.real());
  mix(lambda.imag());
  return h;
}

}  // namespace detail

class SpectralFn : public std::enable_shared_from_this<SpectralFn> {
 public:
  SpectralFn(int dim_xi, int rows, int cols, AnisotropyVector ell, bool cache)
      : dim_xi_(dim_xi), rows_(rows), cols_(cols), ell_(std::move(ell)), cache_enabled_(cache) {
    if (ell_.dim() != dim_xi_ + 2)
      throw std::invalid_argument("SpectralFn: anisotropy must cover xi axes plus Re/Im lambda");
  }
  virtual ~SpectralFn() = default;

  int dim_xi() const { return dim_xi_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const AnisotropyVector& ell() const { return ell_; }

  Eigen::MatrixXcd eval(const Eigen::VectorXd& xi, cplx lambda) const {
    if (xi.size() != dim_xi_) throw std::invalid_argument("SpectralFn::eval: xi dimension mismatch");
    if (!cache_enabled_) return eval_impl(xi, lambda);
    const std::uint64_t key = detail::point_key(xi, lambda);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    Eigen::MatrixXcd v = eval_impl(xi, lambda);
    std::lock_guard<std::mutex> lock(mu_);
    if (cache_.size() > 1u << 20) cache_.clear();
    cache_.emplace(key, v);
    return v;
  }

  /// d/d(axis); exact for structured nodes, finite differences otherwise.
  SpectralFnPtr derivative(int axis) const {
    if (axis < 0 || axis >= dim_xi_ + 2) throw std::invalid_argument("SpectralFn::derivative: bad axis");
    std::lock_guard<std::mutex> lock(mu_);
    auto it = deriv_cache_.find(axis);
    if (it != deriv_cache_.end()) return it->second;
    SpectralFnPtr d = derivative_impl(axis);
    deriv_cache_.emplace(axis, d);
    return d;
  }

  /// Iterated derivative for a (d+2)-multi-index over (xi, lambda) axes.
  SpectralFnPtr derivative(const MultiIndex& beta) const {
    if (beta.dim() != dim_xi_ + 2) throw std::invalid_argument("SpectralFn::derivative: beta dimension");
    SpectralFnPtr cur = shared_from_this();
    for (int axis = 0; axis < beta.dim(); ++axis)
      for (int k = 0; k < beta[axis]; ++k) cur = cur->derivative(axis);
    return cur;
  }

  virtual bool is_zero() const { return false; }

 protected:
  virtual Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const = 0;
  virtual SpectralFnPtr derivative_impl(int axis) const;  // defined after FDDerivFn

  int dim_xi_, rows_, cols_;
  AnisotropyVector ell_;
  bool cache_enabled_;

 private:
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, Eigen::MatrixXcd> cache_;
  mutable std::map<int, SpectralFnPtr> deriv_cache_;
};

// ---------------------------------------------------------------------------
// Structured nodes

class ConstantFn final : public SpectralFn {
 public:
  ConstantFn(Eigen::MatrixXcd m, int dim_xi, AnisotropyVector ell)
      : SpectralFn(dim_xi, static_cast<int>(m.rows()), static_cast<int>(m.cols()), std::move(ell),
                   /*cache=*/false),
        m_(std::move(m)) {}
  bool is_zero() const override { return m_.isZero(0.0); }

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd&, cplx) const override { return m_; }
  SpectralFnPtr derivative_impl(int) const override {
    return std::make_shared<ConstantFn>(Eigen::MatrixXcd::Zero(rows_, cols_), dim_xi_, ell_);
  }

 private:
  Eigen::MatrixXcd m_;
};

/// coeff * xi^alpha * lambda^k with lambda a complex (holomorphic) power.
class MonomialFn final : public SpectralFn {
 public:
  MonomialFn(Eigen::MatrixXcd coeff, MultiIndex alpha_xi, int lambda_pow, AnisotropyVector ell)
      : SpectralFn(alpha_xi.dim(), static_cast<int>(coeff.rows()), static_cast<int>(coeff.cols()),
                   std::move(ell), /*cache=*/false),
        coeff_(std::move(coeff)),
        alpha_(std::move(alpha_xi)),
        k_(lambda_pow) {
    if (k_ < 0) throw std::invalid_argument("MonomialFn: negative lambda power");
  }
  bool is_zero() const override { return coeff_.isZero(0.0); }

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    cplx s = 1.0;
    for (int j = 0; j < dim_xi_; ++j)
      for (int r = 0; r < alpha_[j]; ++r) s *= xi[j];
    for (int r = 0; r < k_; ++r) s *= lambda;
    return s * coeff_;
  }
  SpectralFnPtr derivative_impl(int axis) const override {
    if (axis < dim_xi_) {
      if (alpha_[axis] == 0)
        return std::make_shared<ConstantFn>(Eigen::MatrixXcd::Zero(rows_, cols_), dim_xi_, ell_);
      std::vector<int> a = alpha_.entries();
      const double f = a[axis];
      a[axis] -= 1;
      return std::make_shared<MonomialFn>(f * coeff_, MultiIndex(a), k_, ell_);
    }
    // d/dRe(lambda) lambda^k = k lambda^{k-1}; d/dIm(lambda) = i k lambda^{k-1}
    if (k_ == 0)
      return std::make_shared<ConstantFn>(Eigen::MatrixXcd::Zero(rows_, cols_), dim_xi_, ell_);
    const cplx f = axis == dim_xi_ ? cplx(k_, 0.0) : cplx(0.0, 1.0) * static_cast<double>(k_);
    return std::make_shared<MonomialFn>(f * coeff_, alpha_, k_ - 1, ell_);
  }

 private:
  Eigen::MatrixXcd coeff_;
  MultiIndex alpha_;
  int k_;
};

class SumFn final : public SpectralFn {
 public:
  SumFn(std::vector<SpectralFnPtr> parts, int dim_xi, int rows, int cols, AnisotropyVector ell)
      : SpectralFn(dim_xi, rows, cols, std::move(ell), /*cache=*/true), parts_(std::move(parts)) {}

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (const auto& p : parts_) acc += p->eval(xi, lambda);
    return acc;
  }
  SpectralFnPtr derivative_impl(int axis) const override {
    std::vector<SpectralFnPtr> d;
    d.reserve(parts_.size());
    for (const auto& p : parts_) d.push_back(p->derivative(axis));
    return std::make_shared<SumFn>(std::move(d), dim_xi_, rows_, cols_, ell_);
  }

 private:
  std::vector<SpectralFnPtr> parts_;
};

class ProductFn final : public SpectralFn {
 public:
  ProductFn(SpectralFnPtr a, SpectralFnPtr b)
      : SpectralFn(a->dim_xi(), a->rows(), b->cols(), a->ell(), /*cache=*/true),
        a_(std::move(a)),
        b_(std::move(b)) {
    if (a_->cols() != b_->rows()) throw std::invalid_argument("ProductFn: inner dimensions");
  }

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    return a_->eval(xi, lambda) * b_->eval(xi, lambda);
  }
  SpectralFnPtr derivative_impl(int axis) const override {
    std::vector<SpectralFnPtr> parts{std::make_shared<ProductFn>(a_->derivative(axis), b_),
                                     std::make_shared<ProductFn>(a_, b_->derivative(axis))};
    return std::make_shared<SumFn>(std::move(parts), dim_xi_, rows_, cols_, ell_);
  }

 private:
  SpectralFnPtr a_, b_;
};

/// Scalar (1x1 node) times matrix node; the scalar is evaluated first and an
/// exact zero short-circuits the matrix factor, so excised regions never
/// evaluate singular inverses.
class ScaleFn final : public SpectralFn {
 public:
  ScaleFn(SpectralFnPtr scalar, SpectralFnPtr mat)
      : SpectralFn(mat->dim_xi(), mat->rows(), mat->cols(), mat->ell(), /*cache=*/true),
        s_(std::move(scalar)),
        m_(std::move(mat)) {
    if (s_->rows() != 1 || s_->cols() != 1) throw std::invalid_argument("ScaleFn: scalar node must be 1x1");
  }

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    const cplx s = s_->eval(xi, lambda)(0, 0);
    if (s == cplx(0.0, 0.0)) return Eigen::MatrixXcd::Zero(rows_, cols_);
    return s * m_->eval(xi, lambda);
  }
  SpectralFnPtr derivative_impl(int axis) const override {
    std::vector<SpectralFnPtr> parts{std::make_shared<ScaleFn>(s_->derivative(axis), m_),
                                     std::make_shared<ScaleFn>(s_, m_->derivative(axis))};
    return std::make_shared<SumFn>(std::move(parts), dim_xi_, rows_, cols_, ell_);
  }

 private:
  SpectralFnPtr s_, m_;
};

class ConstScaleFn final : public SpectralFn {
 public:
  ConstScaleFn(cplx c, SpectralFnPtr m)
      : SpectralFn(m->dim_xi(), m->rows(), m->cols(), m->ell(), /*cache=*/false),
        c_(c),
        m_(std::move(m)) {}
  bool is_zero() const override { return c_ == cplx(0.0, 0.0) || m_->is_zero(); }

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    return c_ * m_->eval(xi, lambda);
  }
  SpectralFnPtr derivative_impl(int axis) const override {
    return std::make_shared<ConstScaleFn>(c_, m_->derivative(axis));
  }

 private:
  cplx c_;
  SpectralFnPtr m_;
};

/// Pointwise matrix inverse with condition tracking.
class InverseFn final : public SpectralFn {
 public:
  InverseFn(SpectralFnPtr a, std::shared_ptr<ConditionLog> log)
      : SpectralFn(a->dim_xi(), a->rows(), a->cols(), a->ell(), /*cache=*/true),
        a_(std::move(a)),
        log_(std::move(log)) {
    if (rows_ != cols_) throw std::invalid_argument("InverseFn: square matrices required");
  }

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    const Eigen::MatrixXcd a = a_->eval(xi, lambda);
    const double cond = condition_number(a);
    if (log_) log_->record(cond);
    const double threshold = log_ ? log_->threshold : 1e12;
    if (!(cond < threshold))
      throw std::runtime_error("InverseFn: ill-conditioned matrix (cond " + std::to_string(cond) +
                               "), ellipticity fails at the probe");
    if (rows_ == 1) return Eigen::MatrixXcd::Constant(1, 1, 1.0 / a(0, 0));
    return a.partialPivLu().inverse();
  }
  SpectralFnPtr derivative_impl(int axis) const override {
    // d(A^{-1}) = -A^{-1} (dA) A^{-1}
    SpectralFnPtr self = shared_from_this();
    SpectralFnPtr inner = std::make_shared<ProductFn>(a_->derivative(axis), self);
    return std::make_shared<ConstScaleFn>(cplx(-1.0, 0.0),
                                          std::make_shared<ProductFn>(self, inner));
  }

 private:
  SpectralFnPtr a_;
  std::shared_ptr<ConditionLog> log_;
};

/// Radial excision chi_theta: 0 for |zeta|_l <= theta/c, 1 for |zeta|_l >= c theta,
/// a C^4 smoothstep in log|zeta|_l between. With xi_only set, the radius uses
/// only the xi block (for multipliers independent of lambda).
class ExcisionFn final : public SpectralFn {
 public:
  ExcisionFn(AnisotropyVector ell, int dim_xi, double c, double theta, bool xi_only = false)
      : SpectralFn(dim_xi, 1, 1, std::move(ell), /*cache=*/false),
        c_(c),
        theta_(theta),
        xi_only_(xi_only),
        xi_ell_(xi_only ? AnisotropyVector(std::vector<int>(ell_.entries().begin(),
                                                            ell_.entries().begin() + dim_xi))
                        : ell_) {
    if (!(c_ > 1.0)) throw std::invalid_argument("ExcisionFn: excision constant must exceed 1");
    if (!(theta_ >= 1.0)) throw std::invalid_argument("ExcisionFn: theta must be >= 1");
  }

  double radius_inner() const { return theta_ / c_; }
  double radius_outer() const { return theta_ * c_; }

  double value(const Eigen::VectorXd& xi, cplx lambda) const {
    double t;
    if (xi_only_) {
      t = aniso_abs(xi, xi_ell_);
    } else {
      Eigen::VectorXd full(dim_xi_ + 2);
      full.head(dim_xi_) = xi;
      full[dim_xi_] = lambda.real();
      full[dim_xi_ + 1] = lambda.imag();
      t = aniso_abs(full, ell_);
    }
    t /= theta_;
    if (t <= 1.0 / c_) return 0.0;
    if (t >= c_) return 1.0;
    const double u = std::log(t * c_) / (2.0 * std::log(c_));
    return smoothstep9(u);
  }

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    return Eigen::MatrixXcd::Constant(1, 1, value(xi, lambda));
  }

 private:
  static double smoothstep9(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double u2 = u * u;
    const double u4 = u2 * u2;
    return u4 * u * (126.0 + u * (-420.0 + u * (540.0 + u * (-315.0 + u * 70.0))));
  }

  double c_, theta_;
  bool xi_only_;
  AnisotropyVector xi_ell_;
};

/// <zeta>_l^s with the coordinates of zeta = (xi, Re lambda, Im lambda); with
/// xi_only, <xi>_{l'}^s using the xi block alone.
class BracketPowFn final : public SpectralFn {
 public:
  BracketPowFn(AnisotropyVector ell, int dim_xi, double s, bool xi_only = false)
      : SpectralFn(dim_xi, 1, 1, std::move(ell), /*cache=*/false),
        s_(s),
        xi_only_(xi_only),
        xi_ell_(xi_only ? AnisotropyVector(std::vector<int>(ell_.entries().begin(),
                                                            ell_.entries().begin() + dim_xi))
                        : ell_) {}

  double value(const Eigen::VectorXd& xi, cplx lambda) const {
    double b;
    if (xi_only_) {
      b = aniso_bracket(xi, xi_ell_);
    } else {
      Eigen::VectorXd full(dim_xi_ + 2);
      full.head(dim_xi_) = xi;
      full[dim_xi_] = lambda.real();
      full[dim_xi_ + 1] = lambda.imag();
      b = aniso_bracket(full, ell_);
    }
    return std::exp(s_ * std::log(b));
  }

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    return Eigen::MatrixXcd::Constant(1, 1, value(xi, lambda));
  }

 private:
  double s_;
  bool xi_only_;
  AnisotropyVector xi_ell_;
};

/// |zeta|_l^s (or |xi|_{l'}^s with xi_only); undefined at the origin, so it is
/// only ever evaluated under an excision scale that vanishes there.
class AbsPowFn final : public SpectralFn {
 public:
  AbsPowFn(AnisotropyVector ell, int dim_xi, double s, bool xi_only = false)
      : SpectralFn(dim_xi, 1, 1, std::move(ell), /*cache=*/false),
        s_(s),
        xi_only_(xi_only),
        xi_ell_(xi_only ? AnisotropyVector(std::vector<int>(ell_.entries().begin(),
                                                            ell_.entries().begin() + dim_xi))
                        : ell_) {}

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    double r;
    if (xi_only_) {
      r = aniso_abs(xi, xi_ell_);
    } else {
      Eigen::VectorXd full(dim_xi_ + 2);
      full.head(dim_xi_) = xi;
      full[dim_xi_] = lambda.real();
      full[dim_xi_ + 1] = lambda.imag();
      r = aniso_abs(full, ell_);
    }
    if (r <= 0.0 && s_ < 0.0) throw std::domain_error("AbsPowFn: negative power at the origin");
    return Eigen::MatrixXcd::Constant(1, 1, r <= 0.0 ? 0.0 : std::exp(s_ * std::log(r)));
  }

 private:
  double s_;
  bool xi_only_;
  AnisotropyVector xi_ell_;
};

/// Arbitrary closure; derivatives are finite differences.
class ClosureFn final : public SpectralFn {
 public:
  using Fn = std::function<Eigen::MatrixXcd(const Eigen::VectorXd&, cplx)>;
  ClosureFn(Fn fn, int dim_xi, int rows, int cols, AnisotropyVector ell)
      : SpectralFn(dim_xi, rows, cols, std::move(ell), /*cache=*/true), fn_(std::move(fn)) {}

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    return fn_(xi, lambda);
  }

 private:
  Fn fn_;
};

/// Anisotropically homogeneous extension of a function given on the unit
/// sphere { |(xi,lambda)|_l = 1 }.
class HomogeneousExtensionFn final : public SpectralFn {
 public:
  using Fn = std::function<Eigen::MatrixXcd(const Eigen::VectorXd&, cplx)>;
  HomogeneousExtensionFn(Fn on_sphere, double degree, int dim_xi, int rows, int cols,
                         AnisotropyVector ell)
      : SpectralFn(dim_xi, rows, cols, std::move(ell), /*cache=*/true),
        fn_(std::move(on_sphere)),
        degree_(degree) {}

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    Eigen::VectorXd full(dim_xi_ + 2);
    full.head(dim_xi_) = xi;
    full[dim_xi_] = lambda.real();
    full[dim_xi_ + 1] = lambda.imag();
    const double rho = aniso_abs(full, ell_);
    if (rho <= 0.0) throw std::domain_error("HomogeneousExtensionFn: undefined at the origin");
    const Eigen::VectorXd dir = ell_.dilate(full, 1.0 / rho);
    const Eigen::VectorXd dir_xi = dir.head(dim_xi_);
    const cplx dir_lambda(dir[dim_xi_], dir[dim_xi_ + 1]);
    return std::exp(degree_ * std::log(rho)) * fn_(dir_xi, dir_lambda);
  }

 private:
  Fn fn_;
  double degree_;
};

// ---------------------------------------------------------------------------
// Finite-difference fallback

/// Richardson-extrapolated centered difference along one axis with the
/// anisotropy-aware step h_axis = h0 * <point>_l^{l_axis}.
class FDDerivFn final : public SpectralFn {
 public:
  FDDerivFn(SpectralFnPtr base, int axis)
      : SpectralFn(base->dim_xi(), base->rows(), base->cols(), base->ell(), /*cache=*/true),
        base_(std::move(base)),
        axis_(axis) {}

  static constexpr double kBaseStep = 0x1p-11;  // 2^-11

 protected:
  Eigen::MatrixXcd eval_impl(const Eigen::VectorXd& xi, cplx lambda) const override {
    Eigen::VectorXd full(dim_xi_ + 2);
    full.head(dim_xi_) = xi;
    full[dim_xi_] = lambda.real();
    full[dim_xi_ + 1] = lambda.imag();
    const double scale = std::pow(aniso_bracket(full, ell_), ell_[axis_]);
    const double h = kBaseStep * scale;
    auto shifted = [&](double offset) {
      Eigen::VectorXd sx = xi;
      cplx sl = lambda;
      if (axis_ < dim_xi_)
        sx[axis_] += offset;
      else if (axis_ == dim_xi_)
        sl += cplx(offset, 0.0);
      else
        sl += cplx(0.0, offset);
      return base_->eval(sx, sl);
    };
    // (8 (f(h) - f(-h)) - (f(2h) - f(-2h))) / (12 h): centered stencil with
    // one Richardson level
    return (8.0 * (shifted(h) - shifted(-h)) - (shifted(2.0 * h) - shifted(-2.0 * h))) /
           (12.0 * h);
  }

 private:
  SpectralFnPtr base_;
  int axis_;
};

inline SpectralFnPtr SpectralFn::derivative_impl(int axis) const {
  return std::make_shared<FDDerivFn>(shared_from_this(), axis);
}

// ---------------------------------------------------------------------------
// Factories

inline SpectralFnPtr make_constant_fn(Eigen::MatrixXcd m, int dim_xi, AnisotropyVector ell) {
  return std::make_shared<ConstantFn>(std::move(m), dim_xi, std::move(ell));
}
inline SpectralFnPtr make_identity_fn(int m, int dim_xi, AnisotropyVector ell) {
  return make_constant_fn(Eigen::MatrixXcd::Identity(m, m), dim_xi, std::move(ell));
}
inline SpectralFnPtr make_monomial_fn(Eigen::MatrixXcd coeff, MultiIndex alpha_xi, int lambda_pow,
                                      AnisotropyVector ell) {
  return std::make_shared<MonomialFn>(std::move(coeff), std::move(alpha_xi), lambda_pow,
                                      std::move(ell));
}
inline SpectralFnPtr make_sum_fn(std::vector<SpectralFnPtr> parts) {
  if (parts.empty()) throw std::invalid_argument("make_sum_fn: empty sum");
  const auto& f = parts.front();
  return std::make_shared<SumFn>(std::move(parts), f->dim_xi(), f->rows(), f->cols(), f->ell());
}
inline SpectralFnPtr make_product_fn(SpectralFnPtr a, SpectralFnPtr b) {
  return std::make_shared<ProductFn>(std::move(a), std::move(b));
}
inline SpectralFnPtr make_scale_fn(SpectralFnPtr scalar, SpectralFnPtr m) {
  return std::make_shared<ScaleFn>(std::move(scalar), std::move(m));
}
inline SpectralFnPtr make_cscale_fn(cplx c, SpectralFnPtr m) {
  return std::make_shared<ConstScaleFn>(c, std::move(m));
}
inline SpectralFnPtr make_inverse_fn(SpectralFnPtr a, std::shared_ptr<ConditionLog> log = nullptr) {
  return std::make_shared<InverseFn>(std::move(a), std::move(log));
}
inline std::shared_ptr<const ExcisionFn> make_excision_fn(AnisotropyVector ell, int dim_xi,
                                                          double c = 2.0, double theta = 1.0,
                                                          bool xi_only = false) {
  return std::make_shared<ExcisionFn>(std::move(ell), dim_xi, c, theta, xi_only);
}
inline SpectralFnPtr make_bracket_pow_fn(AnisotropyVector ell, int dim_xi, double s,
                                         bool xi_only = false) {
  return std::make_shared<BracketPowFn>(std::move(ell), dim_xi, s, xi_only);
}
inline SpectralFnPtr make_abs_pow_fn(AnisotropyVector ell, int dim_xi, double s,
                                     bool xi_only = false) {
  return std::make_shared<AbsPowFn>(std::move(ell), dim_xi, s, xi_only);
}
inline SpectralFnPtr make_closure_fn(ClosureFn::Fn fn, int dim_xi, int rows, int cols,
                                     AnisotropyVector ell) {
  return std::make_shared<ClosureFn>(std::move(fn), dim_xi, rows, cols, std::move(ell));
}

}  // namespace psdr
