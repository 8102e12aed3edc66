// SPDX-License-Identifier: Apache-2.0
//
// Order-tagged matrix symbols a(x, xi, lambda) with derivative access, probe
// sets, seminorms, and the operational "measured order" (log-log slope along
// dyadic anisotropic shells).
//
// A symbol is a sum of terms. The common separable form couples a scalar
// x-profile with a spectral factor; the joint form keeps a full closure for
// symbols whose x-dependence does not factor (x-dependent principal parts).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psdr/core/anisotropy.hpp"
#include "psdr/core/linalg.hpp"
#include "psdr/core/random.hpp"
#include "psdr/core/sector.hpp"
#include "psdr/rbound/estimate.hpp"
#include "psdr/symbols/spectral.hpp"
#include "psdr/symbols/xprofile.hpp"

namespace psdr {

// ---------------------------------------------------------------------------
// Joint (non-separable) evaluators

class JointFn;
using JointFnPtr = std::shared_ptr<const JointFn>;

class JointFn : public std::enable_shared_from_this<JointFn> {
 public:
  JointFn(int dim_x, int rows, int cols, AnisotropyVector ell)
      : dim_x_(dim_x), rows_(rows), cols_(cols), ell_(std::move(ell)) {}
  virtual ~JointFn() = default;

  int dim_x() const { return dim_x_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const AnisotropyVector& ell() const { return ell_; }

  virtual Eigen::MatrixXcd eval(const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                                cplx lambda) const = 0;

  JointFnPtr deriv_x(int axis) const;      // finite differences in x
  JointFnPtr deriv_spec(int axis) const;   // finite differences in (xi, lambda)

 protected:
  int dim_x_, rows_, cols_;
  AnisotropyVector ell_;
};

class JointClosureFn final : public JointFn {
 public:
  using Fn = std::function<Eigen::MatrixXcd(const Eigen::VectorXd&, const Eigen::VectorXd&, cplx)>;
  JointClosureFn(Fn fn, int dim_x, int rows, int cols, AnisotropyVector ell)
      : JointFn(dim_x, rows, cols, std::move(ell)), fn_(std::move(fn)) {}
  Eigen::MatrixXcd eval(const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                        cplx lambda) const override {
    return fn_(x, xi, lambda);
  }

 private:
  Fn fn_;
};

class JointFDDeriv final : public JointFn {
 public:
  JointFDDeriv(JointFnPtr base, int axis, bool in_x)
      : JointFn(base->dim_x(), base->rows(), base->cols(), base->ell()),
        base_(std::move(base)),
        axis_(axis),
        in_x_(in_x) {}

  Eigen::MatrixXcd eval(const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                        cplx lambda) const override {
    double h = FDDerivFn::kBaseStep;
    if (!in_x_) {
      Eigen::VectorXd full(xi.size() + 2);
      full.head(xi.size()) = xi;
      full[xi.size()] = lambda.real();
      full[xi.size() + 1] = lambda.imag();
      h *= std::pow(aniso_bracket(full, ell_), ell_[axis_]);
    } else {
      h *= std::max(1.0, std::abs(x[axis_]));
    }
    auto shifted = [&](double offset) {
      Eigen::VectorXd sx = x, sxi = xi;
      cplx sl = lambda;
      if (in_x_)
        sx[axis_] += offset;
      else if (axis_ < xi.size())
        sxi[axis_] += offset;
      else if (axis_ == xi.size())
        sl += cplx(offset, 0.0);
      else
        sl += cplx(0.0, offset);
      return base_->eval(sx, sxi, sl);
    };
    return (8.0 * (shifted(h) - shifted(-h)) - (shifted(2.0 * h) - shifted(-2.0 * h))) /
           (12.0 * h);
  }

 private:
  JointFnPtr base_;
  int axis_;
  bool in_x_;
};

inline JointFnPtr JointFn::deriv_x(int axis) const {
  return std::make_shared<JointFDDeriv>(shared_from_this(), axis, /*in_x=*/true);
}
inline JointFnPtr JointFn::deriv_spec(int axis) const {
  return std::make_shared<JointFDDeriv>(shared_from_this(), axis, /*in_x=*/false);
}

// ---------------------------------------------------------------------------
// MatrixSymbol

class MatrixSymbol {
 public:
  struct Term {
    cplx coeff = 1.0;
    XProfilePtr xpart;    // separable form
    SpectralFnPtr spec;   //
    JointFnPtr joint;     // or joint form

    bool is_joint() const { return static_cast<bool>(joint); }
    bool is_zero() const {
      if (coeff == cplx(0.0, 0.0)) return true;
      if (is_joint()) return false;
      return (xpart && xpart->is_zero()) || (spec && spec->is_zero());
    }
  };

  MatrixSymbol(double order, AnisotropyVector ell, int dim_x, int rows, int cols,
               std::vector<Term> terms)
      : order_(order),
        ell_(std::move(ell)),
        dim_x_(dim_x),
        rows_(rows),
        cols_(cols) {
    if (ell_.dim() != dim_x_ + 2)
      throw std::invalid_argument("MatrixSymbol: anisotropy must have length dim_x + 2");
    terms_.reserve(terms.size());
    for (auto& t : terms) {
      if (t.is_zero()) continue;
      if (t.is_joint()) {
        if (t.joint->rows() != rows_ || t.joint->cols() != cols_)
          throw std::invalid_argument("MatrixSymbol: joint term shape mismatch");
      } else {
        if (!t.xpart || !t.spec) throw std::invalid_argument("MatrixSymbol: incomplete term");
        if (t.spec->rows() != rows_ || t.spec->cols() != cols_)
          throw std::invalid_argument("MatrixSymbol: term shape mismatch");
      }
      terms_.push_back(std::move(t));
    }
  }

  double order() const { return order_; }
  const AnisotropyVector& ell() const { return ell_; }
  int dim_x() const { return dim_x_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool x_independent() const {
    for (const auto& t : terms_) {
      if (t.is_joint()) return false;
      if (!t.xpart->is_constant()) return false;
    }
    return true;
  }

  Eigen::MatrixXcd eval(const Eigen::VectorXd& x, const Eigen::VectorXd& xi, cplx lambda) const {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (const auto& t : terms_) {
      if (t.is_joint()) {
        acc += t.coeff * t.joint->eval(x, xi, lambda);
      } else {
        const double g = t.xpart->eval(x);
        if (g != 0.0) acc += t.coeff * g * t.spec->eval(xi, lambda);
      }
    }
    return acc;
  }

  /// Derivative in the (xi, lambda) block; beta has dim_x + 2 entries. The
  /// order tag drops by the anisotropic length of beta.
  MatrixSymbol spec_derivative(const MultiIndex& beta) const {
    if (beta.dim() != dim_x_ + 2)
      throw std::invalid_argument("MatrixSymbol::spec_derivative: beta must have dim_x + 2 entries");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Term nt = t;
      if (t.is_joint()) {
        JointFnPtr cur = t.joint;
        for (int axis = 0; axis < beta.dim(); ++axis)
          for (int k = 0; k < beta[axis]; ++k) cur = cur->deriv_spec(axis);
        nt.joint = cur;
      } else {
        nt.spec = t.spec->derivative(beta);
      }
      out.push_back(std::move(nt));
    }
    return MatrixSymbol(order_ - static_cast<double>(aniso_length(beta, ell_)), ell_, dim_x_,
                        rows_, cols_, std::move(out));
  }

  /// D_x^alpha = (-i)^{|alpha|} partial_x^alpha; leaves the spectral order
  /// unchanged (x-dependence is zero-order classical).
  MatrixSymbol x_derivative_D(const MultiIndex& alpha) const {
    if (alpha.dim() != dim_x_)
      throw std::invalid_argument("MatrixSymbol::x_derivative_D: alpha must have dim_x entries");
    const cplx factor = std::pow(cplx(0.0, -1.0), alpha.order());
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Term nt = t;
      nt.coeff = t.coeff * factor;
      if (t.is_joint()) {
        JointFnPtr cur = t.joint;
        for (int axis = 0; axis < alpha.dim(); ++axis)
          for (int k = 0; k < alpha[axis]; ++k) cur = cur->deriv_x(axis);
        nt.joint = cur;
      } else {
        nt.xpart = derivative_profile(t.xpart, alpha);
      }
      if (!nt.is_zero()) out.push_back(std::move(nt));
    }
    return MatrixSymbol(order_, ell_, dim_x_, rows_, cols_, std::move(out));
  }

  MatrixSymbol with_order(double mu) const {
    return MatrixSymbol(mu, ell_, dim_x_, rows_, cols_, terms_);
  }

  MatrixSymbol scaled(cplx c) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff *= c;
    return MatrixSymbol(order_, ell_, dim_x_, rows_, cols_, std::move(out));
  }

  static MatrixSymbol identity(int m, double order, const AnisotropyVector& ell, int dim_x) {
    Term t;
    t.xpart = constant_profile(1.0);
    t.spec = make_identity_fn(m, dim_x, ell);
    return MatrixSymbol(order, ell, dim_x, m, m, {std::move(t)});
  }

  static MatrixSymbol from_spectral(SpectralFnPtr fn, double order, int dim_x) {
    Term t;
    t.xpart = constant_profile(1.0);
    const AnisotropyVector ell = fn->ell();
    const int rows = fn->rows(), cols = fn->cols();
    t.spec = std::move(fn);
    return MatrixSymbol(order, ell, dim_x, rows, cols, {std::move(t)});
  }

  static MatrixSymbol from_joint(JointFnPtr fn, double order) {
    Term t;
    const AnisotropyVector ell = fn->ell();
    const int rows = fn->rows(), cols = fn->cols(), dim_x = fn->dim_x();
    t.joint = std::move(fn);
    return MatrixSymbol(order, ell, dim_x, rows, cols, {std::move(t)});
  }

  friend MatrixSymbol operator+(const MatrixSymbol& a, const MatrixSymbol& b) {
    a.check_compatible(b);
    std::vector<Term> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return MatrixSymbol(std::max(a.order_, b.order_), a.ell_, a.dim_x_, a.rows_, a.cols_,
                        std::move(terms));
  }

  friend MatrixSymbol operator-(const MatrixSymbol& a, const MatrixSymbol& b) {
    return a + b.scaled(cplx(-1.0, 0.0));
  }

  /// Multiply every term's spectral factor by a scalar node (excisions etc.).
  MatrixSymbol scaled_by_fn(const SpectralFnPtr& scalar) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (t.is_joint()) {
        // fold the scalar into a joint closure
        auto base = t.joint;
        auto s = scalar;
        auto fn = [base, s](const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                            cplx lambda) -> Eigen::MatrixXcd {
          const cplx v = s->eval(xi, lambda)(0, 0);
          if (v == cplx(0.0, 0.0))
            return Eigen::MatrixXcd::Zero(base->rows(), base->cols());
          return v * base->eval(x, xi, lambda);
        };
        Term nt;
        nt.coeff = t.coeff;
        nt.joint = std::make_shared<JointClosureFn>(std::move(fn), dim_x_, rows_, cols_, ell_);
        out.push_back(std::move(nt));
      } else {
        Term nt = t;
        nt.spec = make_scale_fn(scalar, t.spec);
        out.push_back(std::move(nt));
      }
    }
    return MatrixSymbol(order_, ell_, dim_x_, rows_, cols_, std::move(out));
  }

 private:
  void check_compatible(const MatrixSymbol& b) const {
    if (dim_x_ != b.dim_x_ || rows_ != b.rows_ || cols_ != b.cols_ || !(ell_ == b.ell_))
      throw std::invalid_argument("MatrixSymbol: incompatible operands");
  }

  double order_;
  AnisotropyVector ell_;
  int dim_x_, rows_, cols_;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Probes

struct ProbePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd xi;
  cplx lambda = 0.0;
};

struct ProbeSet {
  std::vector<ProbePoint> points;
  std::string description;
};

/// Probe points on dyadic anisotropic shells |(xi,lambda)|_l = 2^k,
/// k = k_lo..k_hi, with random directions (lambda direction constrained to the
/// sector when given), crossed with the supplied x probes.
inline ProbeSet dyadic_probes(int dim_x, const AnisotropyVector& ell, const SectorSpec* sector,
                              int k_lo, int k_hi, int dirs_per_shell,
                              const std::vector<Eigen::VectorXd>& x_probes, std::uint64_t seed) {
  if (k_hi < k_lo || dirs_per_shell < 1) throw std::invalid_argument("dyadic_probes: bad shell range");
  ProbeSet out;
  out.description = "dyadic shells 2^" + std::to_string(k_lo) + "..2^" + std::to_string(k_hi) +
                    " x " + std::to_string(dirs_per_shell) + " dirs";
  RandomStream root(seed);
  std::vector<Eigen::VectorXd> xs = x_probes;
  if (xs.empty()) xs.push_back(Eigen::VectorXd::Zero(dim_x));
  const int n = dim_x + 2;

  // deterministic axis directions shared by every shell, then seeded random
  // directions drawn from per-(shell,dir) child streams so that probe sets
  // nest as dirs_per_shell grows
  std::vector<Eigen::VectorXd> base_dirs;
  for (int j = 0; j < dim_x; ++j)
    for (double sgn : {1.0, -1.0}) {
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
      dir[j] = sgn;
      dir[dim_x] = 0.05;  // angle-zero parameter component, inside any sector
      base_dirs.push_back(dir);
    }
  {
    const double phi = sector ? sector->half_angle : std::numbers::pi;
    for (int a = 0; a < 5; ++a) {
      const double angle = -phi + 2.0 * phi * a / 4.0;
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
      dir[dim_x] = std::cos(angle);
      dir[dim_x + 1] = std::sin(angle);
      base_dirs.push_back(dir);
    }
  }

  for (int k = k_lo; k <= k_hi; ++k) {
    std::vector<Eigen::VectorXd> dirs = base_dirs;
    for (int d = 0; d < dirs_per_shell; ++d) {
      RandomStream rng = root.child(static_cast<std::uint64_t>(k)).child(static_cast<std::uint64_t>(d));
      Eigen::VectorXd dir(n);
      for (int j = 0; j < dim_x; ++j) dir[j] = rng.normal();
      if (sector) {
        const double angle = rng.uniform(-sector->half_angle, sector->half_angle);
        const double mag = std::abs(rng.normal()) + 0.1;
        const cplx lam = std::polar(mag, angle);
        dir[dim_x] = lam.real();
        dir[dim_x + 1] = lam.imag();
      } else {
        dir[dim_x] = rng.normal();
        dir[dim_x + 1] = rng.normal();
      }
      dirs.push_back(dir);
    }
    for (const auto& dir : dirs) {
      if (aniso_abs(dir, ell) <= 0.0) continue;
      const Eigen::VectorXd unit = aniso_normalize(dir, ell);
      const Eigen::VectorXd zeta = ell.dilate(unit, std::ldexp(1.0, k));
      for (const auto& x : xs) {
        ProbePoint pt;
        pt.x = x;
        pt.xi = zeta.head(dim_x);
        pt.lambda = cplx(zeta[dim_x], zeta[dim_x + 1]);
        out.points.push_back(std::move(pt));
      }
    }
  }
  return out;
}

/// Probe points on dyadic shells with directions from a nested angular grid
/// (doubling angular_n refines the direction set, keeping every old point).
/// Supports d = 1 and d = 2; the parameter-plane angle is remapped into the
/// sector when one is given.
inline ProbeSet graded_sphere_probes(int dim_x, const AnisotropyVector& ell,
                                     const SectorSpec* sector, int k_lo, int k_hi, int angular_n,
                                     const std::vector<Eigen::VectorXd>& x_probes = {}) {
  if (dim_x < 1 || dim_x > 2) throw std::invalid_argument("graded_sphere_probes: dim_x must be 1 or 2");
  if (angular_n < 2) throw std::invalid_argument("graded_sphere_probes: angular_n >= 2");
  ProbeSet out;
  out.description = "graded shells 2^" + std::to_string(k_lo) + "..2^" + std::to_string(k_hi) +
                    ", angular n=" + std::to_string(angular_n);
  std::vector<Eigen::VectorXd> xs = x_probes;
  if (xs.empty()) xs.push_back(Eigen::VectorXd::Zero(dim_x));
  const int n = dim_x + 2;
  const double pi = std::numbers::pi;

  std::vector<Eigen::VectorXd> dirs;
  auto lambda_angle = [&](double raw) {  // remap (-pi, pi] into the sector
    return sector ? raw * sector->half_angle / pi : raw;
  };
  if (dim_x == 1) {
    // S^2: polar theta against the xi axis, azimuth in the lambda plane
    for (int i = 0; i <= angular_n; ++i) {
      const double th = pi * i / angular_n;
      const int m_az = (i == 0 || i == angular_n) ? 1 : 2 * angular_n;
      for (int j = 0; j < m_az; ++j) {
        const double raw = -pi + 2.0 * pi * j / m_az;
        const double ph = lambda_angle(raw);
        Eigen::VectorXd dir(3);
        dir << std::cos(th), std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph);
        dirs.push_back(dir);
      }
    }
  } else {
    // S^3: two polar angles, azimuth in the lambda plane
    for (int i = 0; i <= angular_n; ++i) {
      const double a1 = pi * i / angular_n;
      for (int j = 0; j <= angular_n; ++j) {
        const double a2 = pi * j / angular_n;
        const int m_az = 2 * angular_n;
        for (int k = 0; k < m_az; ++k) {
          const double raw = -pi + 2.0 * pi * k / m_az;
          const double ph = lambda_angle(raw);
          Eigen::VectorXd dir(4);
          dir << std::cos(a1), std::sin(a1) * std::cos(a2),
              std::sin(a1) * std::sin(a2) * std::cos(ph),
              std::sin(a1) * std::sin(a2) * std::sin(ph);
          dirs.push_back(dir);
        }
      }
    }
  }

  for (int k = k_lo; k <= k_hi; ++k) {
    for (const auto& dir : dirs) {
      if (aniso_abs(dir, ell) <= 1e-15) continue;
      const Eigen::VectorXd unit = aniso_normalize(dir, ell);
      const Eigen::VectorXd zeta = ell.dilate(unit, std::ldexp(1.0, k));
      for (const auto& x : xs) {
        ProbePoint pt;
        pt.x = x;
        pt.xi = zeta.head(dim_x);
        pt.lambda = cplx(zeta[dim_x], zeta[dim_x + 1]);
        out.points.push_back(std::move(pt));
      }
    }
  }
  return out;
}

/// Default x probes: origin, a box-scale point per axis, and the settling
/// radius, so x-dependent coefficients are sampled where they vary and where
/// they have settled.
inline std::vector<Eigen::VectorXd> default_x_probes(int dim_x, double box_halfwidth) {
  std::vector<Eigen::VectorXd> xs;
  xs.push_back(Eigen::VectorXd::Zero(dim_x));
  for (int j = 0; j < dim_x; ++j) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_x);
    x[j] = box_halfwidth / 2.0;
    xs.push_back(x);
    x[j] = -box_halfwidth;
    xs.push_back(x);
  }
  return xs;
}

// ---------------------------------------------------------------------------
// Seminorms

enum class SeminormKind { SupNorm, RBound };

struct SeminormReport {
  MultiIndex beta;
  SeminormKind kind = SeminormKind::SupNorm;
  double value = 0.0;
  std::string probe_description;
  std::string method;
};

/// The beta seminorm: the normalized derivative family
/// { <(xi,lambda)>_l^{-mu+|beta|_l} d^beta a } over the probes, measured either
/// by its sup of spectral norms or by the R-bound estimator.
inline SeminormReport seminorm(const MatrixSymbol& a, const MultiIndex& beta, SeminormKind kind,
                               const ProbeSet& probes, const RBoundBudget& budget = {},
                               int max_order_per_axis = 4) {
  for (int j = 0; j < beta.dim(); ++j)
    if (beta[j] > max_order_per_axis)
      throw std::invalid_argument("seminorm: derivative order exceeds configured maximum");
  if (probes.points.empty()) throw std::invalid_argument("seminorm: empty probe set");

  const MatrixSymbol da = a.spec_derivative(beta);
  const double expo = -a.order() + static_cast<double>(aniso_length(beta, a.ell()));
  std::vector<Eigen::MatrixXcd> family;
  family.reserve(probes.points.size());
  for (const auto& pt : probes.points) {
    Eigen::VectorXd full(a.dim_x() + 2);
    full.head(a.dim_x()) = pt.xi;
    full[a.dim_x()] = pt.lambda.real();
    full[a.dim_x() + 1] = pt.lambda.imag();
    const double w = std::exp(expo * std::log(aniso_bracket(full, a.ell())));
    family.push_back(w * da.eval(pt.x, pt.xi, pt.lambda));
  }

  SeminormReport rep;
  rep.beta = beta;
  rep.kind = kind;
  rep.probe_description = probes.description;
  if (kind == SeminormKind::SupNorm) {
    double sup = 0.0;
    for (const auto& m : family) sup = std::max(sup, operator_norm_2(m));
    rep.value = sup;
    rep.method = "sup";
  } else {
    const auto X = BanachSpaceSpec::euclidean(a.cols());
    const auto Y = BanachSpaceSpec::euclidean(a.rows());
    const auto est = rbound_estimate(family, X, Y, 2.0, budget);
    rep.value = est.value;
    rep.method = to_string(est.method);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Measured order

/// Operational order: least-squares slope of log sup-norm against log radius
/// along dyadic shells. Values below the floor are clamped so identically
/// vanishing remainders read as very negative order.
inline double measured_order(const MatrixSymbol& a, int k_lo = 2, int k_hi = 8, int dirs = 8,
                             const std::vector<Eigen::VectorXd>& x_probes = {},
                             const SectorSpec* sector = nullptr, std::uint64_t seed = 17,
                             double floor = 1e-290) {
  RandomStream rng(seed);
  const int n = a.dim_x() + 2;
  std::vector<Eigen::VectorXd> dirs_list;
  for (int d = 0; d < dirs; ++d) {
    Eigen::VectorXd dir(n);
    for (int j = 0; j < a.dim_x(); ++j) dir[j] = rng.normal();
    if (sector) {
      const double angle = rng.uniform(-sector->half_angle, sector->half_angle);
      const double mag = std::abs(rng.normal()) + 0.1;
      dir[a.dim_x()] = mag * std::cos(angle);
      dir[a.dim_x() + 1] = mag * std::sin(angle);
    } else {
      dir[a.dim_x()] = rng.normal();
      dir[a.dim_x() + 1] = rng.normal();
    }
    if (aniso_abs(dir, a.ell()) > 0.0) dirs_list.push_back(aniso_normalize(dir, a.ell()));
  }
  std::vector<Eigen::VectorXd> xs = x_probes;
  if (xs.empty()) xs.push_back(Eigen::VectorXd::Zero(a.dim_x()));

  std::vector<double> logr, logv;
  double global_sup = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double rho = std::ldexp(1.0, k);
    double sup = 0.0;
    for (const auto& dir : dirs_list) {
      const Eigen::VectorXd zeta = a.ell().dilate(dir, rho);
      const Eigen::VectorXd xi = zeta.head(a.dim_x());
      const cplx lambda(zeta[a.dim_x()], zeta[a.dim_x() + 1]);
      for (const auto& x : xs) sup = std::max(sup, operator_norm_2(a.eval(x, xi, lambda)));
    }
    global_sup = std::max(global_sup, sup);
    logr.push_back(std::log(rho));
    logv.push_back(std::log(std::max(sup, floor)));
  }
  // identically vanishing on the probed shells: report an extreme order
  if (global_sup <= floor) return -1000.0;
  return ls_slope(logr, logv);
}

}  // namespace psdr
