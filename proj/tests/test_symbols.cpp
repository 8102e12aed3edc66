// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "psdr/symbols/compose.hpp"
#include "psdr/symbols/symbol.hpp"

using namespace psdr;
using Catch::Approx;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

namespace {

AnisotropyVector heat_ell() { return AnisotropyVector({1, 2, 2}); }  // d=1, lambda-weight 2

MatrixXcd scalar(cplx v) { return MatrixXcd::Constant(1, 1, v); }

// heat symbol a(xi, lambda) = -xi^2 - lambda, order 2
MatrixSymbol heat_symbol() {
  const AnisotropyVector ell = heat_ell();
  MatrixSymbol::Term t1, t2;
  t1.xpart = constant_profile(1.0);
  t1.spec = make_monomial_fn(scalar(-1.0), MultiIndex({2}), 0, ell);
  t2.xpart = constant_profile(1.0);
  t2.spec = make_monomial_fn(scalar(-1.0), MultiIndex({0}), 1, ell);
  return MatrixSymbol(2.0, ell, 1, 1, 1, {t1, t2});
}

VectorXd vec1(double v) {
  VectorXd x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("gaussian profile derivatives match central differences") {
  auto g = gaussian_bump_profile(0.7, 1.3, 2.5);
  RandomStream rng(4);
  for (int t = 0; t < 40; ++t) {
    VectorXd x = rng.normal_vector(2) * 2.0;
    for (auto alpha : {MultiIndex({1, 0}), MultiIndex({0, 2}), MultiIndex({2, 1})}) {
      // numerical derivative of the next-lower analytic derivative
      const int axis = alpha[0] > 0 ? 0 : 1;
      std::vector<int> lower = alpha.entries();
      lower[axis] -= 1;
      const double h = 1e-5;
      VectorXd xp = x, xm = x;
      xp[axis] += h;
      xm[axis] -= h;
      const double fd = (g->deriv(MultiIndex(lower), xp) - g->deriv(MultiIndex(lower), xm)) / (2 * h);
      REQUIRE(g->deriv(alpha, x) == Approx(fd).margin(1e-6));
    }
  }
  REQUIRE(g->limit_infinity() == Approx(0.7));
  REQUIRE(derivative_profile(g, MultiIndex({1, 0}))->limit_infinity() == 0.0);
}

TEST_CASE("product profile Leibniz rule") {
  auto a = gaussian_bump_profile(1.0, 0.5, 2.0);
  auto b = gaussian_bump_profile(0.0, 2.0, 3.0);
  auto p = product_profile(a, b);
  VectorXd x = vec1(0.8);
  const double h = 1e-5;
  const double fd = (p->eval(vec1(0.8 + h)) - p->eval(vec1(0.8 - h))) / (2 * h);
  REQUIRE(p->deriv(MultiIndex({1}), x) == Approx(fd).margin(1e-7));
  REQUIRE(p->limit_infinity() == Approx(0.0));
}

TEST_CASE("monomial nodes differentiate exactly") {
  const AnisotropyVector ell = heat_ell();
  auto m = make_monomial_fn(scalar(2.0), MultiIndex({3}), 2, ell);  // 2 xi^3 lambda^2
  const VectorXd xi = vec1(1.5);
  const cplx lam(0.4, -0.7);
  REQUIRE(std::abs(m->eval(xi, lam)(0, 0) - 2.0 * std::pow(1.5, 3) * lam * lam) < 1e-12);
  // d/dxi: 6 xi^2 lambda^2
  auto dxi = m->derivative(0);
  REQUIRE(std::abs(dxi->eval(xi, lam)(0, 0) - 6.0 * 2.25 * lam * lam) < 1e-12);
  // d/dRe(lambda): 4 xi^3 lambda ; d/dIm(lambda): i * that
  auto dre = m->derivative(1);
  auto dim = m->derivative(2);
  REQUIRE(std::abs(dre->eval(xi, lam)(0, 0) - 4.0 * std::pow(1.5, 3) * lam) < 1e-12);
  REQUIRE(std::abs(dim->eval(xi, lam)(0, 0) - cplx(0, 1) * 4.0 * std::pow(1.5, 3) * lam) < 1e-12);
}

TEST_CASE("inverse node derivative follows the product rule DAG") {
  const AnisotropyVector ell = heat_ell();
  // f = -xi^2 - lambda, f^{-1} derivative in xi: 2 xi f^{-2}
  std::vector<SpectralFnPtr> parts{make_monomial_fn(scalar(-1.0), MultiIndex({2}), 0, ell),
                                   make_monomial_fn(scalar(-1.0), MultiIndex({0}), 1, ell)};
  auto f = make_sum_fn(parts);
  auto inv = make_inverse_fn(f);
  auto dinv = inv->derivative(0);
  const VectorXd xi = vec1(1.2);
  const cplx lam(2.0, 1.0);
  const cplx fval = -1.44 - lam;
  REQUIRE(std::abs(dinv->eval(xi, lam)(0, 0) - 2.0 * 1.2 / (fval * fval)) < 1e-12);
}

TEST_CASE("finite-difference fallback is accurate for smooth nodes") {
  const AnisotropyVector ell({1, 1, 1});
  auto br = make_bracket_pow_fn(ell, 1, 1.5);  // <(xi,lambda)>^{3/2}
  const VectorXd xi = vec1(0.9);
  const cplx lam(0.3, 0.2);
  // closed form: d/dxi (1+xi^2+|lam|^2)^{3/4} = (3/2) xi (1+..)^{-1/4}
  const double s2 = 1.0 + 0.81 + std::norm(lam);
  const double want = 1.5 * 0.9 * std::pow(s2, -0.25);
  auto d = br->derivative(0);
  REQUIRE(d->eval(xi, lam)(0, 0).real() == Approx(want).epsilon(1e-8));
}

TEST_CASE("symbol evaluation and derivative bookkeeping") {
  MatrixSymbol a = heat_symbol();
  REQUIRE(a.x_independent());
  REQUIRE(a.eval(vec1(0.0), vec1(2.0), cplx(1.0, 1.0))(0, 0) == cplx(-5.0, -1.0));

  // d/dxi drops the anisotropic order by l_1 = 1
  MatrixSymbol da = a.spec_derivative(MultiIndex({1, 0, 0}));
  REQUIRE(da.order() == Approx(1.0));
  REQUIRE(da.eval(vec1(0.0), vec1(2.0), cplx(0, 0))(0, 0) == cplx(-4.0, 0.0));

  // d/dRe(lambda) drops by the lambda weight 2
  MatrixSymbol dl = a.spec_derivative(MultiIndex({0, 1, 0}));
  REQUIRE(dl.order() == Approx(0.0));
  REQUIRE(dl.eval(vec1(0.0), vec1(7.0), cplx(0, 0))(0, 0) == cplx(-1.0, 0.0));
}

TEST_CASE("x derivative uses D = -i d/dx") {
  const AnisotropyVector ell = heat_ell();
  MatrixSymbol::Term t;
  t.xpart = gaussian_bump_profile(0.0, 1.0, 1.0);
  t.spec = make_identity_fn(1, 1, ell);
  MatrixSymbol b(0.0, ell, 1, 1, 1, {t});
  MatrixSymbol Db = b.x_derivative_D(MultiIndex({1}));
  const VectorXd x = vec1(0.5);
  const double phi_prime = -2.0 * 0.5 * std::exp(-0.25);  // d/dx e^{-x^2}
  REQUIRE(std::abs(Db.eval(x, vec1(0.0), 0.0)(0, 0) - cplx(0, -1) * phi_prime) < 1e-13);
}

TEST_CASE("seminorm examples") {
  const AnisotropyVector ell({1, 2, 2});
  const ProbeSet probes = dyadic_probes(1, ell, nullptr, 0, 7, 8, {}, 31);

  SECTION("normalized bracket power has seminorm one") {
    const double mu = 1.5;
    MatrixSymbol a = MatrixSymbol::from_spectral(make_bracket_pow_fn(ell, 1, mu), mu, 1);
    auto rep = seminorm(a, MultiIndex({0, 0, 0}), SeminormKind::SupNorm, probes);
    REQUIRE(rep.value == Approx(1.0).epsilon(1e-12));
  }

  SECTION("constant symbol: sup seminorm is the operator norm") {
    MatrixXcd C(2, 2);
    C << 1.0, 2.0, 0.0, cplx(0.0, 1.0);
    const AnisotropyVector ell2({1, 1, 1});
    MatrixSymbol a = MatrixSymbol::from_spectral(make_constant_fn(C, 1, ell2), 0.0, 1);
    const ProbeSet pr = dyadic_probes(1, ell2, nullptr, 0, 4, 4, {}, 5);
    auto rep = seminorm(a, MultiIndex::zero(3), SeminormKind::SupNorm, pr);
    REQUIRE(rep.value == Approx(operator_norm_2(C)).epsilon(1e-12));
  }

  SECTION("scalar (1+xi^2)^{1/2}: first-derivative seminorm bounded by one") {
    const AnisotropyVector iso({1, 1, 1});
    MatrixSymbol a =
        MatrixSymbol::from_spectral(make_bracket_pow_fn(iso, 1, 1.0, /*xi_only=*/true), 1.0, 1);
    const ProbeSet pr = dyadic_probes(1, iso, nullptr, 0, 6, 8, {}, 7);
    auto rep = seminorm(a, MultiIndex({1, 0, 0}), SeminormKind::SupNorm, pr);
    REQUIRE(rep.value <= 1.0 + 1e-6);
    // R-bound kind agrees with sup in the Hilbert/oracle regime
    auto repR = seminorm(a, MultiIndex({1, 0, 0}), SeminormKind::RBound, pr);
    REQUIRE(repR.value == Approx(rep.value).epsilon(1e-12));
  }

  SECTION("derivative order cap is enforced") {
    MatrixSymbol a = heat_symbol();
    REQUIRE_THROWS_AS(seminorm(a, MultiIndex({5, 0, 0}), SeminormKind::SupNorm, probes),
                      std::invalid_argument);
  }
}

TEST_CASE("measured order recovers the symbol order") {
  MatrixSymbol a = heat_symbol();
  const double slope = measured_order(a, 2, 8, 6);
  REQUIRE(slope == Approx(2.0).margin(0.25));
}

TEST_CASE("compose: x-independent right factor collapses to the pointwise product") {
  MatrixSymbol a = heat_symbol();
  MatrixSymbol b = MatrixSymbol::from_spectral(
      make_bracket_pow_fn(heat_ell(), 1, -1.0), -1.0, 1);
  MatrixSymbol ab = compose(a, b, 3);
  REQUIRE(ab.order() == Approx(1.0));
  RandomStream rng(8);
  for (int t = 0; t < 20; ++t) {
    const VectorXd xi = vec1(rng.normal() * 3);
    const cplx lam(rng.normal(), rng.normal());
    const cplx want = a.eval(vec1(0), xi, lam)(0, 0) * b.eval(vec1(0), xi, lam)(0, 0);
    REQUIRE(std::abs(ab.eval(vec1(0), xi, lam)(0, 0) - want) < 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("compose: polynomial times multiplication operator terminates exactly") {
  // a(xi) = xi, b(x) = phi(x) I: (a#b)(x, xi) = phi(x) xi - i phi'(x), exact for N >= 1
  const AnisotropyVector ell({1, 1, 1});
  MatrixSymbol::Term ta;
  ta.xpart = constant_profile(1.0);
  ta.spec = make_monomial_fn(scalar(1.0), MultiIndex({1}), 0, ell);
  MatrixSymbol a(1.0, ell, 1, 1, 1, {ta});

  auto phi = gaussian_bump_profile(0.3, 1.0, 1.5);
  MatrixSymbol::Term tb;
  tb.xpart = phi;
  tb.spec = make_identity_fn(1, 1, ell);
  MatrixSymbol b(0.0, ell, 1, 1, 1, {tb});

  for (int N : {1, 2, 4}) {
    MatrixSymbol ab = compose(a, b, N);
    RandomStream rng(9);
    for (int t = 0; t < 10; ++t) {
      const double x = rng.normal();
      const double xi = rng.normal() * 2;
      const cplx want =
          phi->eval(vec1(x)) * xi + cplx(0, -1) * phi->deriv(MultiIndex({1}), vec1(x));
      const cplx got = ab.eval(vec1(x), vec1(xi), cplx(0.5, 0.5))(0, 0);
      REQUIRE(std::abs(got - want) < 1e-12 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("compose: identity is neutral") {
  MatrixSymbol a = heat_symbol();
  MatrixSymbol one = MatrixSymbol::identity(1, 0.0, heat_ell(), 1);
  MatrixSymbol ia = compose(one, a, 2);
  MatrixSymbol ai = compose(a, one, 2);
  RandomStream rng(10);
  for (int t = 0; t < 10; ++t) {
    const VectorXd xi = vec1(rng.normal() * 2);
    const cplx lam(rng.normal(), rng.normal());
    const cplx want = a.eval(vec1(0), xi, lam)(0, 0);
    REQUIRE(std::abs(ia.eval(vec1(0), xi, lam)(0, 0) - want) < 1e-13 * (1.0 + std::abs(want)));
    REQUIRE(std::abs(ai.eval(vec1(0), xi, lam)(0, 0) - want) < 1e-13 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("compose rejects mismatched bases") {
  MatrixSymbol a = heat_symbol();
  MatrixSymbol b = MatrixSymbol::identity(1, 0.0, AnisotropyVector({1, 3, 3}), 1);
  REQUIRE_THROWS_AS(compose(a, b, 1), std::invalid_argument);
}
