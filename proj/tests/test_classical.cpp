// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "psdr/symbols/classical.hpp"
#include "psdr/symbols/compose.hpp"

using namespace psdr;
using Catch::Approx;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

namespace {

MatrixXcd scalar(cplx v) { return MatrixXcd::Constant(1, 1, v); }

VectorXd vec1(double v) {
  VectorXd x(1);
  x << v;
  return x;
}

AnisotropyVector heat_ell() { return AnisotropyVector({1, 2, 2}); }

// principal (and only) component of the heat symbol: -xi^2 - lambda
MatrixSymbol heat_principal() {
  const AnisotropyVector ell = heat_ell();
  MatrixSymbol::Term t1, t2;
  t1.xpart = constant_profile(1.0);
  t1.spec = make_monomial_fn(scalar(-1.0), MultiIndex({2}), 0, ell);
  t2.xpart = constant_profile(1.0);
  t2.spec = make_monomial_fn(scalar(-1.0), MultiIndex({0}), 1, ell);
  return MatrixSymbol(2.0, ell, 1, 1, 1, {t1, t2});
}

ClassicalSymbol heat_classical() {
  return ClassicalSymbol({HomogeneousComponent{2.0, heat_principal()}});
}

double chi_value(const SpectralFnPtr& chi, const VectorXd& xi, cplx lam) {
  return chi->eval(xi, lam)(0, 0).real();
}

}  // namespace

TEST_CASE("excision function seams and values") {
  const AnisotropyVector ell({1, 2, 2});
  auto chi = make_excision_fn(ell, 1, 2.0, 1.0);
  // |zeta|_l <= 1/2 -> 0, >= 2 -> 1
  REQUIRE(chi_value(chi, vec1(0.0), cplx(0, 0)) == 0.0);
  REQUIRE(chi_value(chi, vec1(0.2), cplx(0, 0)) == 0.0);
  REQUIRE(chi_value(chi, vec1(5.0), cplx(0, 0)) == 1.0);
  // monotone in the radius along a ray
  double prev = -1.0;
  for (double r = 0.3; r < 3.0; r *= 1.2) {
    const double v = chi_value(chi, vec1(r), cplx(0, 0));
    REQUIRE(v >= prev - 1e-15);
    prev = v;
  }
}

TEST_CASE("chi_theta rescales anisotropically") {
  const AnisotropyVector ell({1, 2, 2});
  auto chi1 = chi_theta(ell, 1, 2.0, 1.0);
  auto chi2 = chi_theta(ell, 1, 2.0, 2.0);
  SECTION("theta = 1 is chi itself") {
    for (double r : {0.4, 0.9, 1.7, 3.0})
      REQUIRE(chi_value(chi1, vec1(r), cplx(0.3, 0.1)) ==
              Approx(chi_value(make_excision_fn(ell, 1, 2.0, 1.0), vec1(r), cplx(0.3, 0.1))));
  }
  SECTION("chi_theta is one beyond c theta") {
    REQUIRE(chi_value(chi2, vec1(0.0), cplx(16.0, 0.0)) == 1.0);  // |zeta|_l = 4 = c theta
    REQUIRE(chi_value(chi2, vec1(5.0), cplx(0, 0)) == 1.0);
  }
  SECTION("componentwise dilation identity") {
    // chi_theta(zeta) = chi(dilate(zeta, 1/theta)): compare on a sample
    RandomStream rng(6);
    for (int t = 0; t < 50; ++t) {
      VectorXd z = rng.normal_vector(3) * 3.0;
      const VectorXd zs = ell.dilate(z, 1.0 / 2.0);
      REQUIRE(chi_value(chi2, vec1(z[0]), cplx(z[1], z[2])) ==
              Approx(chi_value(chi1, vec1(zs[0]), cplx(zs[1], zs[2]))).margin(1e-14));
    }
  }
  SECTION("theta below one is rejected") {
    REQUIRE_THROWS_AS(chi_theta(ell, 1, 2.0, 0.5), std::invalid_argument);
  }
}

TEST_CASE("homogeneous extension") {
  SECTION("degree zero constant extends to the constant") {
    const AnisotropyVector ell({1, 1, 1});
    auto ext = homogeneous_extend(
        [](const VectorXd&, cplx) { return MatrixXcd::Constant(1, 1, 3.5); }, 0.0, ell, 1, 1, 1);
    REQUIRE(ext->eval(vec1(2.7), cplx(1, -4))(0, 0).real() == Approx(3.5).epsilon(1e-12));
  }
  SECTION("xi on the line extends to xi") {
    const AnisotropyVector ell({1, 1, 1});
    auto ext = homogeneous_extend(
        [](const VectorXd& xi, cplx) { return MatrixXcd::Constant(1, 1, xi[0]); }, 1.0, ell, 1, 1,
        1);
    for (double x : {0.3, -2.0, 7.5})
      REQUIRE(ext->eval(vec1(x), cplx(0.5, 0.5))(0, 0).real() == Approx(x).epsilon(1e-12));
  }
  SECTION("anisotropic polynomial restricted to the sphere extends to itself") {
    // on R^2 with l' = (1,2): xi_1^4 + xi_2^2 is homogeneous of degree 4
    const AnisotropyVector ell({1, 2, 4, 4});
    auto ext = homogeneous_extend(
        [](const VectorXd& xi, cplx) {
          return MatrixXcd::Constant(1, 1, std::pow(xi[0], 4) + xi[1] * xi[1]);
        },
        4.0, ell, 2, 1, 1);
    RandomStream rng(12);
    for (int t = 0; t < 50; ++t) {
      VectorXd xi = rng.normal_vector(2) * 2.0;
      if (xi.norm() < 0.1) continue;
      const double want = std::pow(xi[0], 4) + xi[1] * xi[1];
      REQUIRE(ext->eval(xi, cplx(0.7, -0.2))(0, 0).real() == Approx(want).epsilon(1e-10));
    }
  }
  SECTION("undefined at the origin") {
    const AnisotropyVector ell({1, 1, 1});
    auto ext = homogeneous_extend(
        [](const VectorXd&, cplx) { return MatrixXcd::Constant(1, 1, 1.0); }, 1.0, ell, 1, 1, 1);
    REQUIRE_THROWS_AS(ext->eval(vec1(0.0), cplx(0, 0)), std::domain_error);
  }
}

TEST_CASE("classical symbol assembly and homogeneity") {
  ClassicalSymbol heat = heat_classical();
  REQUIRE(heat.order() == Approx(2.0));
  REQUIRE(heat.homogeneity_error() <= 1e-10);

  MatrixSymbol assembled = heat.assemble();
  // beyond the excision the assembled symbol equals the principal part
  const VectorXd xi = vec1(3.0);
  const cplx lam(4.0, 1.0);
  REQUIRE(std::abs(assembled.eval(vec1(0), xi, lam)(0, 0) - (cplx(-9.0, 0.0) - lam)) < 1e-13);
  // near the origin it vanishes
  REQUIRE(std::abs(assembled.eval(vec1(0), vec1(0.1), cplx(0.01, 0.0))(0, 0)) == 0.0);

  SECTION("degrees must strictly decrease") {
    REQUIRE_THROWS_AS(ClassicalSymbol({HomogeneousComponent{2.0, heat_principal()},
                                       HomogeneousComponent{2.0, heat_principal()}}),
                      std::invalid_argument);
  }
}

TEST_CASE("classical symbols are R-bounded: seminorms saturate under probe refinement") {
  ClassicalSymbol heat = heat_classical();
  MatrixSymbol a = heat.assemble();
  const auto betas = {MultiIndex({0, 0, 0}), MultiIndex({1, 0, 0}), MultiIndex({0, 1, 0}),
                      MultiIndex({2, 0, 0}), MultiIndex({1, 1, 0})};
  for (const auto& beta : betas) {
    const ProbeSet coarse = graded_sphere_probes(1, a.ell(), nullptr, 0, 7, 24);
    const ProbeSet fine = graded_sphere_probes(1, a.ell(), nullptr, 0, 7, 48);
    const double v1 = seminorm(a, beta, SeminormKind::RBound, coarse).value;
    const double v2 = seminorm(a, beta, SeminormKind::RBound, fine).value;
    INFO("beta = " << beta.str());
    REQUIRE(std::isfinite(v2));
    REQUIRE(v2 >= v1 - 1e-12);          // more probes can only grow the sup
    REQUIRE(v2 <= v1 * 1.02 + 1e-12);   // saturation within 2%
  }
}

TEST_CASE("asymptotic sums") {
  const AnisotropyVector ell({1, 2, 2});
  auto term = [&](double order, double amp) {
    return MatrixSymbol::from_spectral(make_bracket_pow_fn(ell, 1, order), order, 1)
        .scaled(amp);
  };

  SECTION("single small term keeps theta = 1") {
    auto res = asymptotic_sum({term(-1.0, 0.1)}, 1);
    REQUIRE(res.thetas.size() == 1);
    REQUIRE(res.thetas[0] == Approx(1.0));
    // the sum is chi * a_1
    const VectorXd xi = vec1(8.0);
    const cplx lam(1.0, 0.0);
    const double want = 0.1 * std::pow(aniso_bracket((VectorXd(3) << 8, 1, 0).finished(), ell), -1.0);
    REQUIRE(res.sum.eval(vec1(0), xi, lam)(0, 0).real() == Approx(want).epsilon(1e-10));
  }

  SECTION("all-zero terms sum to zero") {
    std::vector<MatrixSymbol> zeros;
    zeros.push_back(term(-1.0, 0.0));
    zeros.push_back(term(-2.0, 0.0));
    auto res = asymptotic_sum(zeros, 2);
    REQUIRE(res.sum.eval(vec1(0), vec1(3.0), cplx(1, 1))(0, 0) == cplx(0.0, 0.0));
  }

  SECTION("bracket powers: partial-sum remainder has the next order") {
    std::vector<MatrixSymbol> terms{term(-1.0, 1.0), term(-2.0, 1.0), term(-3.0, 1.0)};
    auto res = asymptotic_sum(terms, 3);
    REQUIRE(res.thetas.size() == 3);
    // remainder a - a_1 - a_2 has measured order <= -3 + tol beyond the
    // excision supports (the cut-off discrepancies are compactly supported)
    MatrixSymbol remainder = res.sum - terms[0] - terms[1];
    const double c = 2.0;
    const int k_lo =
        1 + static_cast<int>(std::ceil(std::log2(c * std::max(res.thetas[0], res.thetas[1]))));
    const double slope = measured_order(remainder, k_lo, k_lo + 5, 6);
    REQUIRE(slope <= -3.0 + 0.35);
  }

  SECTION("orders must strictly decrease") {
    REQUIRE_THROWS_AS(asymptotic_sum({term(-1.0, 1.0), term(-1.0, 1.0)}, 2),
                      std::invalid_argument);
  }
}

TEST_CASE("principal inverse") {
  SECTION("scalar constant principal part") {
    const AnisotropyVector ell({1, 1, 1});
    MatrixSymbol comp = MatrixSymbol::from_spectral(
        homogeneous_extend([](const VectorXd&, cplx) { return MatrixXcd::Constant(1, 1, 2.0); },
                           0.0, ell, 1, 1, 1),
        0.0, 1);
    ClassicalSymbol a({HomogeneousComponent{0.0, comp}});
    ClassicalSymbol b = principal_inverse(a);
    MatrixSymbol bs = b.assemble();
    // where chi = 1: b = 1/2
    REQUIRE(bs.eval(vec1(0), vec1(5.0), cplx(0, 0))(0, 0).real() == Approx(0.5).epsilon(1e-12));
  }

  SECTION("heat principal: chi (-xi^2-lambda)^{-1} on the right half-plane") {
    ClassicalSymbol heat = heat_classical();
    auto log = std::make_shared<ConditionLog>();
    ClassicalSymbol b = principal_inverse(heat, log);
    REQUIRE(b.order() == Approx(-2.0));
    MatrixSymbol bs = b.assemble();
    const VectorXd xi = vec1(2.0);
    const cplx lam(3.0, 2.0);  // Re >= 0
    const cplx want = 1.0 / (cplx(-4.0, 0.0) - lam);
    REQUIRE(std::abs(bs.eval(vec1(0), xi, lam)(0, 0) - want) < 1e-12);
    REQUIRE(log->inversions > 0);
    REQUIRE(log->max_cond >= 1.0);
  }

  SECTION("diagonal system inverts entrywise") {
    const AnisotropyVector ell({1, 2, 2});
    MatrixXcd c1 = MatrixXcd::Zero(2, 2), c2 = MatrixXcd::Zero(2, 2);
    c1(0, 0) = -1.0;
    c1(1, 1) = -2.0;
    c2(0, 0) = -1.0;
    c2(1, 1) = -1.0;
    MatrixSymbol::Term t1, t2;
    t1.xpart = constant_profile(1.0);
    t1.spec = make_monomial_fn(c1, MultiIndex({2}), 0, ell);
    t2.xpart = constant_profile(1.0);
    t2.spec = make_monomial_fn(c2, MultiIndex({0}), 1, ell);
    MatrixSymbol principal(2.0, ell, 1, 2, 2, {t1, t2});
    ClassicalSymbol a({HomogeneousComponent{2.0, principal}});
    MatrixSymbol bs = principal_inverse(a).assemble();
    const VectorXd xi = vec1(3.0);
    const cplx lam(5.0, 0.0);
    const auto m = bs.eval(vec1(0), xi, lam);
    REQUIRE(std::abs(m(0, 0) - 1.0 / (-9.0 - lam)) < 1e-12);
    REQUIRE(std::abs(m(1, 1) - 1.0 / (-18.0 - lam)) < 1e-12);
    REQUIRE(std::abs(m(0, 1)) < 1e-15);
  }

  SECTION("singular principal symbol is flagged") {
    const AnisotropyVector ell({1, 1, 1});
    MatrixSymbol::Term t;
    t.xpart = constant_profile(1.0);
    t.spec = make_monomial_fn(MatrixXcd::Constant(1, 1, 1.0), MultiIndex({1}), 0, ell);
    MatrixSymbol principal(1.0, ell, 1, 1, 1, {t});  // a_(1) = xi, vanishes at xi = 0
    ClassicalSymbol a({HomogeneousComponent{1.0, principal}});
    MatrixSymbol bs = principal_inverse(a).assemble();
    // evaluate where chi = 1 but the principal part vanishes
    REQUIRE_THROWS_AS(bs.eval(vec1(0), vec1(0.0), cplx(0.0, 4.0)), std::runtime_error);
  }
}

TEST_CASE("neumann parametrix for the constant-coefficient heat symbol") {
  ClassicalSymbol heat = heat_classical();
  MatrixSymbol a = heat_principal();  // the raw polynomial symbol, no excision
  MatrixSymbol b = principal_inverse(heat).assemble();
  SectorSpec rhp = SectorSpec::right_half_plane(1.0, 256.0, 4, 3);

  SECTION("N = 0 returns b") {
    auto res = neumann_parametrix(a, b, 0, &rhp);
    RandomStream rng(14);
    for (int t = 0; t < 10; ++t) {
      const VectorXd xi = vec1(rng.normal() * 2);
      const cplx lam(std::abs(rng.normal()) * 4 + 0.5, rng.normal());
      REQUIRE(std::abs(res.p.eval(vec1(0), xi, lam)(0, 0) - b.eval(vec1(0), xi, lam)(0, 0)) <
              1e-12);
    }
  }

  SECTION("geometric collapse: p equals the exact resolvent symbol beyond the excision") {
    auto res = neumann_parametrix(a, b, 2, &rhp);
    REQUIRE(res.p.order() == Approx(-2.0));
    REQUIRE(res.precheck_order <= -1.0 + 0.25);
    // at |(xi,lambda)|_l >= c the excision is 1 and p = (-xi^2-lambda)^{-1} exactly
    const VectorXd xi = vec1(3.0);
    const cplx lam(9.0, 4.0);
    const cplx want = 1.0 / (cplx(-9.0, 0.0) - lam);
    REQUIRE(std::abs(res.p.eval(vec1(0), xi, lam)(0, 0) - want) < 1e-11);
    // both remainders vanish there
    REQUIRE(std::abs(res.r1.eval(vec1(0), xi, lam)(0, 0)) < 1e-11);
    REQUIRE(std::abs(res.r2.eval(vec1(0), xi, lam)(0, 0)) < 1e-11);
  }

  SECTION("identity symbol edge case: p = chi sum (1-chi)^k") {
    const AnisotropyVector ell({1, 2, 2});
    MatrixSymbol one_sym = MatrixSymbol::identity(1, 0.0, ell, 1);
    ClassicalSymbol cls({HomogeneousComponent{
        0.0, MatrixSymbol::from_spectral(
                 homogeneous_extend(
                     [](const VectorXd&, cplx) { return MatrixXcd::Identity(1, 1); }, 0.0, ell,
                     1, 1, 1),
                 0.0, 1)}});
    MatrixSymbol b0 = principal_inverse(cls).assemble();
    auto res = neumann_parametrix(one_sym, b0, 3, nullptr);
    auto chi = make_excision_fn(ell, 1, 2.0, 1.0);
    RandomStream rng(15);
    for (int t = 0; t < 10; ++t) {
      const VectorXd xi = vec1(rng.normal() * 3);
      const cplx lam(rng.normal() * 2, rng.normal() * 2);
      const double c = chi->eval(xi, lam)(0, 0).real();
      double want = 0.0;
      for (int k = 0; k <= 3; ++k) want += c * std::pow(1.0 - c, k);
      REQUIRE(res.p.eval(vec1(0), xi, lam)(0, 0).real() == Approx(want).margin(1e-10));
    }
  }
}
