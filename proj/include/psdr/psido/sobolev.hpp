// SPDX-License-Identifier: Apache-2.0
//
// Discrete anisotropic Bessel potential norms
//   ||u||_{s} = || op(<xi>_{l'}^s Id) u ||_{L_p(grid)}
// and the equivalent-norm multiplier m(xi) = 1 + sum_j phi_j(xi) xi_j^{s/l_j'}
// that identifies H^{s;l'}_p with the derivative-based Sobolev space for
// divisible integer s.

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "psdr/psido/op.hpp"
#include "psdr/symbols/symbol.hpp"

namespace psdr {

/// extends the covariable anisotropy l' by unit lambda weights so xi-only
/// symbols can reuse the (xi, lambda) machinery; at lambda = 0 the extended
/// bracket reduces exactly to <xi>_{l'}
inline AnisotropyVector extend_xi_anisotropy(const AnisotropyVector& ell_prime) {
  std::vector<int> e = ell_prime.entries();
  e.push_back(1);
  e.push_back(1);
  return AnisotropyVector(std::move(e));
}

/// multiplier operator <kappa>_{l'}^s Id on the lattice
inline GridOperator bracket_multiplier(const GridSpec& g, const AnisotropyVector& ell_prime,
                                       double s, int fiber_dim) {
  ell_prime.check_dim(g.dimension);
  std::vector<Eigen::MatrixXcd> bins(g.nodes());
  for (long b = 0; b < g.nodes(); ++b) {
    const double w = std::exp(s * std::log(aniso_bracket(g.frequency(b), ell_prime)));
    bins[b] = w * Eigen::MatrixXcd::Identity(fiber_dim, fiber_dim);
  }
  return GridOperator::multiplier(g, fiber_dim, std::move(bins));
}

/// || op(<xi>^s_{l'}) u ||_{L_p}; s = 0 is the plain discrete L_p norm.
inline double sobolev_norm(const GridFunction& u, double s, double p,
                           const AnisotropyVector& ell_prime) {
  u.validate();
  if (s == 0.0) return u.lp_norm(p);
  GridFunction w = bracket_multiplier(u.grid, ell_prime, s, u.fiber.dim).apply(u);
  return w.lp_norm(p);
}

// ---------------------------------------------------------------------------

struct EquivalentNormReport {
  MatrixSymbol m;                     // the multiplier as a xi-only symbol
  double empirical_c = 0.0;           // min over the lattice of m(xi)/<xi>^s
  std::vector<SeminormReport> seminorms;  // beta up to order 2, all finite
  bool pass = false;
};

/// Builds m(xi) = 1 + sum_j chi(xi) |xi|_{l'}^{-s} xi_j^{2s/l_j'} (the phi_j
/// construction), sweeps the lattice for the domination constant, and probes
/// that m is a symbol of order s.
inline EquivalentNormReport equivalent_norm_multiplier(double s_real, const AnisotropyVector& ell_prime,
                                                       const GridSpec& g, double excision_c = 2.0) {
  ell_prime.check_dim(g.dimension);
  const int s = static_cast<int>(s_real);
  if (s_real != s || s < 1) throw std::invalid_argument("equivalent_norm_multiplier: s must be a positive integer");
  for (int j = 0; j < ell_prime.dim(); ++j)
    if (s % ell_prime[j] != 0)
      throw std::invalid_argument("equivalent_norm_multiplier: requires l_j' | s for every axis");

  const int d = g.dimension;
  const AnisotropyVector ell = extend_xi_anisotropy(ell_prime);
  std::vector<MatrixSymbol::Term> terms;
  {
    MatrixSymbol::Term one;
    one.xpart = constant_profile(1.0);
    one.spec = make_identity_fn(1, d, ell);
    terms.push_back(std::move(one));
  }
  const auto chi = make_excision_fn(ell, d, excision_c, 1.0, /*xi_only=*/true);
  const auto abs_pow = make_abs_pow_fn(ell, d, -static_cast<double>(s), /*xi_only=*/true);
  for (int j = 0; j < d; ++j) {
    MatrixSymbol::Term t;
    t.xpart = constant_profile(1.0);
    const SpectralFnPtr mono =
        make_monomial_fn(Eigen::MatrixXcd::Identity(1, 1), MultiIndex::unit(d, j, 2 * s / ell_prime[j]),
                         0, ell);
    t.spec = make_scale_fn(chi, make_scale_fn(abs_pow, mono));
    terms.push_back(std::move(t));
  }
  EquivalentNormReport rep{MatrixSymbol(s_real, ell, d, 1, 1, std::move(terms))};

  // lattice sweep for m(xi) >= c <xi>^s
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
  double cmin = std::numeric_limits<double>::infinity();
  for (long b = 0; b < g.nodes(); ++b) {
    const Eigen::VectorXd k = g.frequency(b);
    const double mv = rep.m.eval(x0, k, 0.0)(0, 0).real();
    const double w = std::exp(s_real * std::log(aniso_bracket(k, ell_prime)));
    cmin = std::min(cmin, mv / w);
  }
  rep.empirical_c = cmin;

  // membership in S^{s;l'}: probes at lambda = 0, beta through order 2
  ProbeSet probes = graded_sphere_probes(std::min(d, 2), ell, nullptr, 0, 7, 12);
  for (auto& pt : probes.points) pt.lambda = 0.0;
  bool all_finite = true;
  for (const auto& beta : MultiIndex::all_up_to(d + 2, 2)) {
    bool lambda_beta = false;
    for (int axis = d; axis < d + 2; ++axis)
      if (beta[axis] > 0) lambda_beta = true;
    if (lambda_beta) continue;  // the multiplier carries no parameter
    auto r = seminorm(rep.m, beta, SeminormKind::SupNorm, probes);
    all_finite = all_finite && std::isfinite(r.value);
    rep.seminorms.push_back(std::move(r));
  }
  rep.pass = rep.empirical_c > 0.0 && all_finite;
  return rep;
}

}  // namespace psdr
