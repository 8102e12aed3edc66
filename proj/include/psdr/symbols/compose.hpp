// SPDX-License-Identifier: Apache-2.0
//
// Symbolic composition (the truncated Leibniz sum), inversion of principal
// components, and the finite Neumann parametrix.

#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "psdr/symbols/classical.hpp"
#include "psdr/symbols/symbol.hpp"

namespace psdr {

namespace detail {

inline MultiIndex extend_to_spec(const MultiIndex& alpha_xi) {
  std::vector<int> e = alpha_xi.entries();
  e.push_back(0);
  e.push_back(0);
  return MultiIndex(std::move(e));
}

inline MatrixSymbol::Term cross_term(const MatrixSymbol::Term& ta, const MatrixSymbol::Term& tb,
                                     cplx scale, int dim_x, int rows, int cols,
                                     const AnisotropyVector& ell) {
  MatrixSymbol::Term t;
  t.coeff = ta.coeff * tb.coeff * scale;
  if (!ta.is_joint() && !tb.is_joint()) {
    XProfilePtr xp;
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim_x);
    if (ta.xpart->is_constant()) {
      t.coeff *= ta.xpart->eval(x0);
      xp = tb.xpart;
    } else if (tb.xpart->is_constant()) {
      t.coeff *= tb.xpart->eval(x0);
      xp = ta.xpart;
    } else {
      xp = product_profile(ta.xpart, tb.xpart);
    }
    t.xpart = std::move(xp);
    t.spec = make_product_fn(ta.spec, tb.spec);
    return t;
  }
  // joint fallback: evaluate both raw factors pointwise
  auto eval_term = [](const MatrixSymbol::Term& term, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& xi, cplx lambda) -> Eigen::MatrixXcd {
    if (term.is_joint()) return term.joint->eval(x, xi, lambda);
    const double g = term.xpart->eval(x);
    if (g == 0.0) return Eigen::MatrixXcd::Zero(term.spec->rows(), term.spec->cols());
    return g * term.spec->eval(xi, lambda);
  };
  auto fn = [ta, tb, eval_term](const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                                cplx lambda) -> Eigen::MatrixXcd {
    return eval_term(ta, x, xi, lambda) * eval_term(tb, x, xi, lambda);
  };
  t.joint = std::make_shared<JointClosureFn>(std::move(fn), dim_x, rows, cols, ell);
  return t;
}

}  // namespace detail

/// Truncated Leibniz composition
///   (a # b)_N = sum_{|alpha| <= N} (1/alpha!) (d_xi^alpha a) (D_x^alpha b),
/// of order mu_a + mu_b. Exact when b is x-independent or when a is
/// polynomial in xi of degree <= N.
inline MatrixSymbol compose(const MatrixSymbol& a, const MatrixSymbol& b, int expansion_order) {
  if (a.cols() != b.rows()) throw std::invalid_argument("compose: inner fiber dimensions");
  if (a.dim_x() != b.dim_x() || !(a.ell() == b.ell()))
    throw std::invalid_argument("compose: symbols live on different bases");
  if (expansion_order < 0) throw std::invalid_argument("compose: negative expansion order");

  std::vector<MatrixSymbol::Term> out;
  for (const auto& alpha : MultiIndex::all_up_to(a.dim_x(), expansion_order)) {
    const MatrixSymbol db = b.x_derivative_D(alpha);
    if (db.terms().empty()) continue;  // b constant in the differentiated axes
    const MatrixSymbol da = a.spec_derivative(detail::extend_to_spec(alpha));
    if (da.terms().empty()) continue;
    const cplx scale = 1.0 / alpha.factorial();
    for (const auto& ta : da.terms())
      for (const auto& tb : db.terms()) {
        auto t = detail::cross_term(ta, tb, scale, a.dim_x(), a.rows(), b.cols(), a.ell());
        if (!t.is_zero()) out.push_back(std::move(t));
      }
    if (out.size() > 200000) throw std::runtime_error("compose: term count exploded");
  }
  return MatrixSymbol(a.order() + b.order(), a.ell(), a.dim_x(), a.rows(), b.cols(),
                      std::move(out));
}

// ---------------------------------------------------------------------------

/// chi * (principal component)^{-1}: a one-component classical symbol of the
/// negated order. Inversions are condition-logged; an ill-conditioned
/// principal value signals failed ellipticity at that probe.
inline ClassicalSymbol principal_inverse(const ClassicalSymbol& a,
                                         std::shared_ptr<ConditionLog> cond_log = nullptr) {
  const HomogeneousComponent& top = a.components().front();
  const MatrixSymbol& f = top.fn;
  if (f.rows() != f.cols()) throw std::invalid_argument("principal_inverse: square fibers required");
  if (!cond_log) cond_log = std::make_shared<ConditionLog>();

  MatrixSymbol inv = [&]() -> MatrixSymbol {
    if (f.x_independent()) {
      std::vector<SpectralFnPtr> parts;
      const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(f.dim_x());
      for (const auto& t : f.terms())
        parts.push_back(make_cscale_fn(t.coeff * t.xpart->eval(x0), t.spec));
      SpectralFnPtr combined = parts.size() == 1 ? parts.front() : make_sum_fn(std::move(parts));
      return MatrixSymbol::from_spectral(make_inverse_fn(combined, cond_log), -top.degree,
                                         f.dim_x());
    }
    // x-dependent principal part: pointwise joint inversion
    auto base = std::make_shared<MatrixSymbol>(f);
    auto log = cond_log;
    auto fn = [base, log](const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                          cplx lambda) -> Eigen::MatrixXcd {
      const Eigen::MatrixXcd m = base->eval(x, xi, lambda);
      const double cond = condition_number(m);
      log->record(cond);
      if (!(cond < log->threshold))
        throw std::runtime_error("principal_inverse: ill-conditioned principal symbol (cond " +
                                 std::to_string(cond) + ")");
      return m.partialPivLu().inverse();
    };
    auto joint = std::make_shared<JointClosureFn>(std::move(fn), f.dim_x(), f.rows(), f.cols(),
                                                  f.ell());
    return MatrixSymbol::from_joint(joint, -top.degree);
  }();

  return ClassicalSymbol({HomogeneousComponent{-top.degree, std::move(inv)}},
                         a.excision_constant());
}

// ---------------------------------------------------------------------------

struct NeumannResult {
  MatrixSymbol p;   // parametrix, order -mu
  MatrixSymbol r1;  // a # p - 1
  MatrixSymbol r2;  // p # a - 1
  double precheck_order = 0.0;  // measured order of 1 - b # a
  std::vector<double> thetas_unused;
};

/// Finite Neumann series parametrix: with r = 1 - b # a,
///   p = (sum_{k<=N} r^{#k}) # b      (equivalently b # (sum_k (1 - a#b)^{#k})),
/// all compositions truncated at expansion order N. Both remainders
/// r_1 = a#p - 1 and r_2 = p#a - 1 then carry order <= -(N+1).
inline NeumannResult neumann_parametrix(const MatrixSymbol& a, const MatrixSymbol& b, int order_n,
                                        const SectorSpec* sector = nullptr,
                                        double precheck_tolerance = 0.25) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("neumann_parametrix: square matching fibers required");
  const int m = a.rows();
  const MatrixSymbol one = MatrixSymbol::identity(m, 0.0, a.ell(), a.dim_x());

  const MatrixSymbol ba = compose(b, a, order_n);
  MatrixSymbol r = (one - ba).with_order(-1.0);

  NeumannResult res{one, one, one};
  // the floor absorbs composition round-off so exactly-cancelling remainders
  // register as vanishing
  res.precheck_order = measured_order(r, 2, 7, 6, {}, sector, 17, /*floor=*/1e-12);
  if (res.precheck_order > -1.0 + precheck_tolerance)
    throw std::runtime_error(
        "neumann_parametrix: 1 - b#a has measured order " + std::to_string(res.precheck_order) +
        ", not <= -1; expansion order too low or ellipticity marginal");

  MatrixSymbol series = one;
  MatrixSymbol power = one;
  for (int k = 1; k <= order_n; ++k) {
    power = compose(power, r, order_n).with_order(-static_cast<double>(k));
    series = series + power;
  }
  series = series.with_order(0.0);

  res.p = compose(series, b, order_n).with_order(b.order());
  res.r1 = (compose(a, res.p, order_n) - one).with_order(-static_cast<double>(order_n + 1));
  res.r2 = (compose(res.p, a, order_n) - one).with_order(-static_cast<double>(order_n + 1));
  return res;
}

}  // namespace psdr
