// SPDX-License-Identifier: Apache-2.0
//
// Classical symbols: finite lists of anisotropically homogeneous components
// glued by an excision function, plus asymptotic summation with per-term
// rescaled excisions.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "psdr/symbols/symbol.hpp"

namespace psdr {

struct HomogeneousComponent {
  double degree = 0.0;
  MatrixSymbol fn;  // exactly homogeneous in (xi, lambda); may carry x-profiles
};

/// The rescaled excision chi_theta(zeta) = chi(zeta_1/theta^{l_1}, ...,
/// zeta_n/theta^{l_n}); radially it is chi(|zeta|_l / theta), and the support
/// of its gradient sits in {theta/c <= |zeta|_l <= c theta}.
inline std::shared_ptr<const ExcisionFn> chi_theta(const AnisotropyVector& ell, int dim_xi,
                                                   double c, double theta) {
  if (theta < 1.0) throw std::invalid_argument("chi_theta: theta must be >= 1");
  return make_excision_fn(ell, dim_xi, c, theta);
}

/// Extends a function given on the anisotropic unit sphere to R^n \ {0} by
/// exact homogeneity of the given degree.
inline SpectralFnPtr homogeneous_extend(HomogeneousExtensionFn::Fn on_sphere, double degree,
                                        const AnisotropyVector& ell, int dim_xi, int rows,
                                        int cols) {
  return std::make_shared<HomogeneousExtensionFn>(std::move(on_sphere), degree, dim_xi, rows,
                                                  cols, ell);
}

class ClassicalSymbol {
 public:
  ClassicalSymbol(std::vector<HomogeneousComponent> components, double excision_c = 2.0)
      : comps_(std::move(components)), c_(excision_c) {
    if (comps_.empty()) throw std::invalid_argument("ClassicalSymbol: no components");
    for (std::size_t j = 1; j < comps_.size(); ++j)
      if (!(comps_[j].degree < comps_[j - 1].degree))
        throw std::invalid_argument("ClassicalSymbol: degrees must strictly decrease");
    if (!(c_ > 1.0)) throw std::invalid_argument("ClassicalSymbol: excision constant must exceed 1");
  }

  double order() const { return comps_.front().degree; }
  double excision_constant() const { return c_; }
  const std::vector<HomogeneousComponent>& components() const { return comps_; }
  const MatrixSymbol& principal() const { return comps_.front().fn; }

  /// sum_{j <= upto} chi * a_{(mu-j)}; upto < 0 keeps every component.
  MatrixSymbol assemble(int upto = -1) const {
    const auto& f = comps_.front().fn;
    const auto chi = make_excision_fn(f.ell(), f.dim_x(), c_, 1.0);
    const int last = upto < 0 ? static_cast<int>(comps_.size()) - 1
                              : std::min<int>(upto, static_cast<int>(comps_.size()) - 1);
    MatrixSymbol acc = comps_.front().fn.scaled_by_fn(chi);
    for (int j = 1; j <= last; ++j) acc = acc + comps_[j].fn.scaled_by_fn(chi);
    return acc.with_order(order());
  }

  /// Relative homogeneity error of every component over random probes;
  /// exactness is by construction for extension-built components, polynomial
  /// components are exactly homogeneous by their degree bookkeeping.
  double homogeneity_error(int n_probes = 64, std::uint64_t seed = 23) const {
    const auto& f0 = comps_.front().fn;
    RandomStream rng(seed);
    double worst = 0.0;
    for (const auto& comp : comps_) {
      for (int t = 0; t < n_probes; ++t) {
        Eigen::VectorXd zeta = rng.normal_vector(f0.dim_x() + 2);
        if (aniso_abs(zeta, f0.ell()) < 0.3) continue;
        const double rho = std::exp(rng.uniform(std::log(0.5), std::log(8.0)));
        const Eigen::VectorXd zr = f0.ell().dilate(zeta, rho);
        Eigen::VectorXd x = rng.normal_vector(f0.dim_x());
        const Eigen::MatrixXcd lhs =
            comp.fn.eval(x, zr.head(f0.dim_x()), cplx(zr[f0.dim_x()], zr[f0.dim_x() + 1]));
        const Eigen::MatrixXcd rhs =
            std::exp(comp.degree * std::log(rho)) *
            comp.fn.eval(x, zeta.head(f0.dim_x()), cplx(zeta[f0.dim_x()], zeta[f0.dim_x() + 1]));
        const double denom = std::max(1e-30, operator_norm_2(rhs));
        worst = std::max(worst, operator_norm_2(lhs - rhs) / denom);
      }
    }
    return worst;
  }

 private:
  std::vector<HomogeneousComponent> comps_;
  double c_;
};

// ---------------------------------------------------------------------------
// Asymptotic summation

struct AsymptoticSumResult {
  MatrixSymbol sum;
  std::vector<double> thetas;  // chosen rescaling per kept term
};

namespace detail {

// battery: sup over probes and over beta in {0, unit derivatives} of the
// seminorm of chi_theta * a at one order above a's own
inline double theta_battery(const MatrixSymbol& a, const SpectralFnPtr& chi,
                            const ProbeSet& probes) {
  const MatrixSymbol cut = a.scaled_by_fn(chi).with_order(a.order() + 1.0);
  double worst = 0.0;
  const int n = a.dim_x() + 2;
  std::vector<MultiIndex> betas{MultiIndex::zero(n)};
  for (int axis = 0; axis < n; ++axis) betas.push_back(MultiIndex::unit(n, axis));
  for (const auto& beta : betas)
    worst = std::max(worst, seminorm(cut, beta, SeminormKind::SupNorm, probes).value);
  return worst;
}

}  // namespace detail

/// Assembles sum_k chi_{theta_k} a_k with each theta_k chosen (doubling search
/// plus bisection) so that a fixed battery of seminorm probes of chi_theta a_k
/// at one order higher drops below 2^{-k}.
inline AsymptoticSumResult asymptotic_sum(const std::vector<MatrixSymbol>& terms, int K,
                                          double excision_c = 2.0, std::uint64_t probe_seed = 29,
                                          int max_doublings = 48) {
  if (terms.empty()) throw std::invalid_argument("asymptotic_sum: no terms");
  K = std::min<int>(K, static_cast<int>(terms.size()));
  if (K < 1) throw std::invalid_argument("asymptotic_sum: K must be >= 1");
  for (std::size_t j = 1; j < terms.size(); ++j)
    if (!(terms[j].order() < terms[j - 1].order()))
      throw std::invalid_argument("asymptotic_sum: orders must strictly decrease");

  const auto& f0 = terms.front();
  const ProbeSet battery =
      dyadic_probes(f0.dim_x(), f0.ell(), nullptr, 0, 6, 6, {}, probe_seed);

  std::vector<double> thetas;
  std::vector<MatrixSymbol::Term> out_terms;
  for (int k = 1; k <= K; ++k) {
    const MatrixSymbol& a_k = terms[k - 1];
    const double target = std::ldexp(1.0, -k);
    double theta = 1.0;
    double value = detail::theta_battery(a_k, chi_theta(f0.ell(), f0.dim_x(), excision_c, theta),
                                         battery);
    int doublings = 0;
    double lo = 1.0;
    while (value >= target) {
      if (++doublings > max_doublings)
        throw std::runtime_error("asymptotic_sum: theta search for term " + std::to_string(k) +
                                 " did not reach the 2^-k bound within the iteration cap");
      lo = theta;
      theta *= 2.0;
      value = detail::theta_battery(a_k, chi_theta(f0.ell(), f0.dim_x(), excision_c, theta),
                                    battery);
    }
    if (theta > 1.0) {
      // bisect toward the smallest admissible theta
      double hi = theta;
      for (int it = 0; it < 8; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double v = detail::theta_battery(
            a_k, chi_theta(f0.ell(), f0.dim_x(), excision_c, mid), battery);
        if (v < target)
          hi = mid;
        else
          lo = mid;
      }
      theta = hi;
    }
    thetas.push_back(theta);
    const auto chi = chi_theta(f0.ell(), f0.dim_x(), excision_c, theta);
    const MatrixSymbol cut = a_k.scaled_by_fn(chi);
    for (const auto& t : cut.terms()) out_terms.push_back(t);
  }

  MatrixSymbol sum(f0.order(), f0.ell(), f0.dim_x(), f0.rows(), f0.cols(), std::move(out_terms));
  return {std::move(sum), std::move(thetas)};
}

}  // namespace psdr
