// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "psdr/core/anisotropy.hpp"
#include "psdr/core/random.hpp"
#include "psdr/core/sector.hpp"

using namespace psdr;
using Catch::Approx;

namespace {
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("anisotropy vector products are consistent") {
  AnisotropyVector ell({1, 2, 3});
  REQUIRE(ell.total() == 6);
  REQUIRE(ell.pi(0) == 6);
  REQUIRE(ell.pi(1) == 3);
  REQUIRE(ell.pi(2) == 2);
  for (int j = 0; j < ell.dim(); ++j) REQUIRE(ell.pi(j) * ell[j] == ell.total());
  REQUIRE_THROWS_AS(AnisotropyVector({1, 0}), std::invalid_argument);
  REQUIRE_THROWS_AS(AnisotropyVector(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("aniso_abs known values") {
  REQUIRE(aniso_abs(vec2(3, 4), AnisotropyVector::isotropic(2)) == Approx(5.0));
  REQUIRE(aniso_abs(Eigen::VectorXd::Zero(3), AnisotropyVector({2, 1, 3})) == 0.0);
  // pi = (2,1), L = 2: (1^4 + 1^2)^{1/4} = 2^{1/4}
  REQUIRE(aniso_abs(vec2(1, 1), AnisotropyVector({1, 2})) == Approx(std::pow(2.0, 0.25)).epsilon(1e-13));
}

TEST_CASE("aniso_bracket known values") {
  AnisotropyVector ell12({1, 2});
  REQUIRE(aniso_bracket(Eigen::VectorXd::Zero(2), ell12) == Approx(1.0));
  REQUIRE(aniso_bracket(vec2(1, 1), ell12) == Approx(std::pow(3.0, 0.25)).epsilon(1e-13));
  REQUIRE(aniso_bracket(vec2(3, 4), AnisotropyVector::isotropic(2)) ==
          Approx(std::sqrt(26.0)).epsilon(1e-13));
}

TEST_CASE("log-space evaluation agrees with the direct formula and survives overflow") {
  AnisotropyVector ell({1, 2});
  // direct formula still representable here, but |xi_1| > 1e3 forces the log path
  Eigen::VectorXd xi = vec2(1e8, 1e5);
  const double direct = std::pow(std::pow(1e8, 4) + std::pow(1e5, 2), 0.25);
  REQUIRE(aniso_abs(xi, ell) == Approx(direct).epsilon(1e-12));
  REQUIRE(aniso_bracket(xi, ell) == Approx(direct).epsilon(1e-12));
  // xi^{2 pi} would overflow; the log path gives the exact homogeneous value
  REQUIRE(aniso_abs(vec2(1e200, 0), ell) == Approx(1e200).epsilon(1e-12));
  REQUIRE(std::isfinite(aniso_bracket(vec2(1e200, 1e150), ell)));
}

TEST_CASE("anisotropic homogeneity of aniso_abs") {
  RandomStream rng(2024);
  for (const auto& entries : {std::vector<int>{1, 1}, {1, 2}, {2, 3}, {3, 1, 2}}) {
    AnisotropyVector ell(entries);
    for (int t = 0; t < 200; ++t) {
      Eigen::VectorXd xi = rng.normal_vector(ell.dim()) * 3.0;
      const double rho = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
      const double lhs = aniso_abs(ell.dilate(xi, rho), ell);
      const double rhs = rho * aniso_abs(xi, ell);
      if (rhs > 0) REQUIRE(lhs == Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("bracket dominates abs and one") {
  RandomStream rng(7);
  AnisotropyVector ell({2, 3});
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd xi = rng.normal_vector(2) * 20.0;
    const double b = aniso_bracket(xi, ell);
    REQUIRE(b >= 1.0);
    REQUIRE(b >= aniso_abs(xi, ell));
  }
}

TEST_CASE("isotropic case reduces to Euclidean quantities exactly") {
  RandomStream rng(99);
  AnisotropyVector iso = AnisotropyVector::isotropic(3);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd xi = rng.normal_vector(3) * 50.0;
    REQUIRE(aniso_abs(xi, iso) == Approx(xi.norm()).epsilon(1e-14));
    REQUIRE(aniso_bracket(xi, iso) == Approx(std::sqrt(1.0 + xi.squaredNorm())).epsilon(1e-14));
  }
  MultiIndex beta({3, 0, 2});
  REQUIRE(aniso_length(beta, iso) == beta.order());
}

TEST_CASE("aniso_length formula and additivity") {
  AnisotropyVector ell({1, 2});
  REQUIRE(aniso_length(MultiIndex({1, 2}), ell) == 5);
  REQUIRE(aniso_length(MultiIndex({0, 0}), ell) == 0);
  REQUIRE(aniso_length(MultiIndex({4, 0}), ell) == 4);
  REQUIRE(aniso_length(MultiIndex({0, 2}), ell) == 4);
  RandomStream rng(3);
  for (int t = 0; t < 100; ++t) {
    MultiIndex b({rng.uniform_int(0, 5), rng.uniform_int(0, 5)});
    MultiIndex g({rng.uniform_int(0, 5), rng.uniform_int(0, 5)});
    REQUIRE(aniso_length(b + g, ell) == aniso_length(b, ell) + aniso_length(g, ell));
  }
  REQUIRE_THROWS_AS(aniso_length(MultiIndex({1}), ell), std::invalid_argument);
}

TEST_CASE("aniso_normalize lands on the unit sphere where the bracket is 2^{1/2L}") {
  RandomStream rng(11);
  AnisotropyVector ell({1, 2});
  const double expected = std::pow(2.0, 1.0 / (2.0 * ell.total()));
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd xi = rng.normal_vector(2) * 10.0;
    if (xi.norm() == 0) continue;
    double rho = 0.0;
    Eigen::VectorXd dir = aniso_normalize(xi, ell, &rho);
    REQUIRE(aniso_abs(dir, ell) == Approx(1.0).epsilon(1e-12));
    REQUIRE(rho == Approx(aniso_abs(xi, ell)));
    REQUIRE(aniso_bracket(dir, ell) == Approx(expected).epsilon(1e-12));
  }
  REQUIRE_THROWS_AS(aniso_normalize(Eigen::VectorXd::Zero(2), ell), std::domain_error);
}

TEST_CASE("Peetre inequality sweeps") {
  RandomStream rng(42);
  SECTION("s = 0 gives ratio one") {
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;
    for (int t = 0; t < 50; ++t)
      samples.emplace_back(rng.normal_vector(2) * 5.0, rng.normal_vector(2) * 5.0);
    auto rep = peetre_check(0.0, samples, AnisotropyVector({1, 2}));
    REQUIRE(rep.pass);
    REQUIRE(rep.max_ratio == Approx(1.0));
  }
  SECTION("xi' = 0 gives ratio one") {
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;
    for (int t = 0; t < 50; ++t)
      samples.emplace_back(rng.normal_vector(2) * 5.0, Eigen::VectorXd::Zero(2));
    auto rep = peetre_check(1.7, samples, AnisotropyVector({2, 3}));
    REQUIRE(rep.pass);
    REQUIRE(rep.max_ratio == Approx(1.0).epsilon(1e-12));
  }
  SECTION("random sweep passes for several anisotropies and exponents") {
    for (const auto& entries : {std::vector<int>{1, 1}, {1, 2}, {2, 3}}) {
      AnisotropyVector ell(entries);
      std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;
      for (int t = 0; t < 1000; ++t)
        samples.emplace_back(rng.normal_vector(2) * 10.0, rng.normal_vector(2) * 10.0);
      for (double s : {1.0, -2.5, 0.5}) {
        auto rep = peetre_check(s, samples, ell);
        INFO("ell=" << entries[0] << entries[1] << " s=" << s);
        REQUIRE(rep.pass);
        REQUIRE(rep.max_ratio <= rep.bound + 1e-12);
      }
    }
  }
}

TEST_CASE("weight equivalence sweep") {
  RandomStream rng(5);
  AnisotropyVector ell({1, 2});
  std::vector<Eigen::VectorXd> samples{Eigen::VectorXd::Zero(2)};
  for (int t = 0; t < 2000; ++t) samples.push_back(rng.normal_vector(2) * 100.0);
  auto rep = weight_equivalence_check(ell, samples);
  REQUIRE(rep.finite_positive);
  REQUIRE(rep.low_ratio_min <= 1.0 + 1e-12);   // c <= 1 (attained at 0)
  REQUIRE(rep.high_ratio_max >= 1.0 - 1e-12);  // C >= 1
}

TEST_CASE("multi-index enumeration and helpers") {
  auto all = MultiIndex::all_up_to(2, 2);
  REQUIRE(all.size() == 6);  // (0,0),(0,1),(1,0),(0,2),(1,1),(2,0)
  REQUIRE(MultiIndex({2, 1}).factorial() == Approx(2.0));
  REQUIRE(MultiIndex({0, 1}).leq(MultiIndex({1, 1})));
  REQUIRE_FALSE(MultiIndex({2, 0}).leq(MultiIndex({1, 1})));
}

TEST_CASE("sector geometry") {
  SectorSpec rhp = SectorSpec::right_half_plane(1.0, 100.0, 4, 5);
  rhp.validate();
  REQUIRE(rhp.samples().size() == 20);
  for (auto z : rhp.samples()) REQUIRE(rhp.contains(z));
  REQUIRE(std::is_sorted(rhp.sample_radii.begin(), rhp.sample_radii.end()));

  REQUIRE(distance_to_sector(cplx(2.0, 1.0), rhp) == 0.0);
  REQUIRE(distance_to_sector(cplx(0.5, 0.0), rhp) == Approx(0.5));
  REQUIRE(distance_to_sector(cplx(-1.0, 0.0), rhp) == Approx(std::sqrt(2.0)));
  REQUIRE(distance_to_sector(cplx(0.0, 0.0), rhp) == Approx(1.0));
  // palm of the sector: angle just outside
  SectorSpec narrow = SectorSpec::make(0.25, 1.0, 10.0, 3, 3);
  REQUIRE(distance_to_sector(std::polar(5.0, 0.3), narrow) ==
          Approx(5.0 * std::sin(0.05)).epsilon(1e-9));

  REQUIRE_THROWS_AS(SectorSpec::make(0.0, 1.0, 2.0, 2, 2), std::invalid_argument);
  SectorSpec bad = rhp;
  bad.sample_angles.push_back(2.0);  // outside pi/2
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}
