#include "cocycle_lab/catalog.hpp"
#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/random.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <deque>
#include <numbers>

using namespace cocycle_lab;

namespace {

LengthFunction z4_roots_length() { return LengthFunction(carrier(build_cyclic(4)), {0, 2, 4, 2}); }

std::vector<Cocycle> catalog_cocycles() {
  std::vector<Cocycle> cs;
  cs.push_back(catalog::zn_roots(4));
  cs.push_back(catalog::zn_roots(7));
  cs.push_back(catalog::helix(1.0, std::numbers::sqrt2, 0.25, 12));
  const std::vector<double> gamma = {1.0, 0.5};
  cs.push_back(catalog::directional(gamma, 3));
  cs.push_back(catalog::free_so3(catalog::kDefaultFreeAngle, 2));
  cs.push_back(catalog::haagerup(2, 2));
  cs.push_back(catalog::heisenberg_roots(3));
  auto d4 = std::make_shared<const FiniteGroup>(build_dihedral(4));
  cs.push_back(catalog::linear_coboundary(d4, catalog::dihedral_plane_rep(4), Eigen::Vector2d(1.0, 0.5)));
  auto s3 = std::make_shared<const FiniteGroup>(build_symmetric(3));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
  v[0] = 1.0;
  v[3] = -0.5;
  cs.push_back(catalog::regular_coboundary(s3, v));
  auto z6 = std::make_shared<const FiniteGroup>(build_cyclic(6));
  const std::vector<Index> hom = {0, 1, 2, 0, 1, 2};
  cs.push_back(catalog::pullback(z6, hom, catalog::zn_roots(3)));
  auto prod = std::make_shared<const FiniteGroup>(build_product(build_cyclic(2), build_cyclic(3)));
  cs.push_back(catalog::direct_sum(prod, catalog::zn_roots(2), catalog::zn_roots(3)));
  return cs;
}

// Word length on S_3 with respect to the transpositions, by breadth-first search.
std::vector<double> s3_word_length_squared(const FiniteGroup& g) {
  std::vector<Index> gens;
  for (Index x = 1; x < g.order(); ++x)
    if (g.mul(x, x) == 0) gens.push_back(x);
  std::vector<int> dist(g.order(), -1);
  dist[0] = 0;
  std::deque<Index> q = {0};
  while (!q.empty()) {
    const Index x = q.front();
    q.pop_front();
    for (Index s : gens) {
      const Index y = g.mul(x, s);
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
    }
  }
  std::vector<double> out;
  for (int d : dist) out.push_back(double(d * d));
  return out;
}

}  // namespace

TEST_SUITE("length-cocycle") {
  TEST_CASE("length function validation") {
    const GroupCarrier z4 = carrier(build_cyclic(4));
    CHECK_THROWS_AS(LengthFunction(z4, {1, 2, 4, 2}), Error);   // psi(e) != 0
    CHECK_THROWS_AS(LengthFunction(z4, {0, -1, 4, -1}), Error);  // negative
    CHECK_THROWS_AS(LengthFunction(z4, {0, 1, 4, 2}), Error);   // not symmetric
    CHECK_THROWS_AS(LengthFunction(z4, {0, 1, 4}), Error);      // wrong size
    CHECK_NOTHROW(LengthFunction(z4, {0, 2, 4, 2}));
  }

  TEST_CASE("Gromov form on Z_4 roots length") {
    const Eigen::MatrixXd k = gromov_form(z4_roots_length());
    CHECK(k(1, 2) == doctest::Approx(2.0));
    CHECK(k(1, 3) == doctest::Approx(0.0));
    CHECK(k(2, 2) == doctest::Approx(4.0));
    CHECK(k(0, 0) == 0.0);
    const Eigen::MatrixXd kr = gromov_form(z4_roots_length(), Side::right);
    CHECK((k - kr).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("conditional negativity certificates") {
    CHECK(is_conditionally_negative(z4_roots_length()).pass);
    CHECK(is_conditionally_negative(LengthFunction(carrier(build_cyclic(4)), {0, 0, 0, 0})).pass);

    // Eigenvalue oracle on the same candidate: min eig of -PMP is -8, so it fails.
    const FiniteGroup z4 = build_cyclic(4);
    const std::vector<double> bad = {0, 1, 10, 1};
    const double oracle_min = oracle::cn_min_eig(z4, bad);
    CHECK(oracle_min == doctest::Approx(-8.0).epsilon(1e-12));
    const NegativityCertificate cert = is_conditionally_negative(LengthFunction(carrier(build_cyclic(4)), bad));
    CHECK_FALSE(cert.pass);
    CHECK(cert.min_eig == doctest::Approx(oracle_min).epsilon(1e-10));
  }

  TEST_CASE("Schoenberg check") {
    const double ts[] = {0.0, 0.1, 1.0, 10.0};
    const FiniteGroup z4 = build_cyclic(4);
    for (const auto& v : schoenberg_check(z4_roots_length(), ts)) {
      CHECK(v.psd);
      CHECK(v.min_eig == doctest::Approx(oracle::heat_min_eig(z4, {0, 2, 4, 2}, v.t)).epsilon(1e-10));
    }
    // t = 0 gives the all-ones matrix: eigenvalues {0, N}.
    CHECK(schoenberg_check(z4_roots_length(), std::span<const double>(ts, 1))[0].min_eig == doctest::Approx(0.0));

    // The failing candidate is already caught at the smallest grid point.
    const LengthFunction bad(carrier(build_cyclic(4)), {0, 1, 10, 1});
    const auto grid = schoenberg_grid();
    REQUIRE(grid.size() == 13);
    CHECK(grid.front() == doctest::Approx(1e-3));
    CHECK(grid.back() == doctest::Approx(1e3));
    const auto verdicts = schoenberg_check(bad, grid);
    CHECK_FALSE(verdicts.front().psd);
    CHECK(verdicts.front().min_eig == doctest::Approx(oracle::heat_min_eig(z4, {0, 1, 10, 1}, 1e-3)).epsilon(1e-9));
    CHECK(verdicts.back().psd);

    const double neg[] = {-1.0};
    CHECK_THROWS_AS(schoenberg_check(z4_roots_length(), neg), Error);
  }

  TEST_CASE("cocycle construction") {
    const Cocycle c = build_cocycle(z4_roots_length());
    CHECK(c.dim == 2);
    // Hand geometry: b(k) = (cos(pi k/2) - 1, sin(pi k/2)), up to an orthogonal change of basis.
    for (Index g = 0; g < 4; ++g)
      for (Index h = 0; h < 4; ++h) {
        const double a = std::numbers::pi * double(g) / 2.0, b = std::numbers::pi * double(h) / 2.0;
        const double dot = (std::cos(a) - 1) * (std::cos(b) - 1) + std::sin(a) * std::sin(b);
        CHECK(c.vec(g).dot(c.vec(h)) == doctest::Approx(dot).epsilon(1e-10).scale(1.0));
      }
    const CocycleResiduals r = cocycle_residuals(c);
    CHECK(r.gram <= 1e-10);
    CHECK(r.length <= 1e-10);
    CHECK(r.law <= 1e-8);
    CHECK(r.orthogonality <= 1e-8);

    const Cocycle zero = build_cocycle(LengthFunction(carrier(build_cyclic(4)), {0, 0, 0, 0}));
    CHECK(zero.dim == 0);
    CHECK(zero.b.size() == 0);

    const Cocycle z2 = build_cocycle(LengthFunction(carrier(build_cyclic(2)), {0, 4}));
    CHECK(z2.dim == 1);
    CHECK(z2.vec(1).norm() == doctest::Approx(2.0));

    CHECK_THROWS_AS(build_cocycle(LengthFunction(carrier(build_cyclic(4)), {0, 1, 10, 1})), Error);
  }

  TEST_CASE("left and right cocycles are isometric") {
    const Cocycle l = build_cocycle(z4_roots_length(), Side::left);
    const Cocycle r = build_cocycle(z4_roots_length(), Side::right);
    CHECK(left_right_isometry_residual(l, r) <= 1e-12);
    CHECK(cocycle_residuals(r).law <= 1e-8);

    const auto s3 = std::make_shared<const FiniteGroup>(build_symmetric(3));
    const std::vector<double> wl2 = s3_word_length_squared(*s3);
    const LengthFunction psi(GroupCarrier(s3), wl2);
    const bool cn = oracle::cn_min_eig(*s3, wl2) >= -1e-10;
    CHECK(is_conditionally_negative(psi).pass == cn);
    if (cn) {
      CHECK(left_right_isometry_residual(build_cocycle(psi, Side::left), build_cocycle(psi, Side::right)) <= 1e-8);
    }
    // A genuinely non-abelian certified example: a regular coboundary on S_3.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    v[0] = 1.0;
    v[1] = 0.3;
    const LengthFunction psi2 = induced_length(catalog::regular_coboundary(s3, v));
    CHECK(left_right_isometry_residual(build_cocycle(psi2, Side::left), build_cocycle(psi2, Side::right)) <= 1e-8);

    const LengthFunction zero(carrier(build_cyclic(3)), {0, 0, 0});
    CHECK(left_right_isometry_residual(build_cocycle(zero, Side::left), build_cocycle(zero, Side::right)) == 0.0);
  }

  TEST_CASE("separation and counting") {
    const Cocycle c = catalog::zn_roots(4);
    const SeparationReport s = separation_report(c);
    CHECK(s.delta == doctest::Approx(2.0));
    CHECK(s.injective);
    CHECK(s.standard);

    const Cocycle zero = build_cocycle(LengthFunction(carrier(build_cyclic(4)), {0, 0, 0, 0}));
    const SeparationReport sz = separation_report(zero);
    CHECK(sz.delta == 0.0);
    CHECK_FALSE(sz.injective);
    CHECK_FALSE(sz.well_separated);
    const double one[] = {1.0};
    CHECK_THROWS_AS(ball_count_check(zero, one), Error);

    CHECK_FALSE(separation_report(catalog::heisenberg_roots(2)).injective);

    const double radii[] = {1.5, 0.0, 10.0};
    const auto counts = ball_count_check(c, radii);
    CHECK(counts[0].count == 3);
    CHECK(counts[0].bound == doctest::Approx(6.25));
    CHECK(counts[0].pass);
    CHECK(counts[1].count == 1);
    CHECK(counts[1].bound == doctest::Approx(1.0));
    CHECK(counts[1].pass);
    CHECK(counts[2].count == 4);
  }

  TEST_CASE("catalog closed forms") {
    const Cocycle z4 = catalog::zn_roots(4);
    const auto len = z4.lengths();
    for (Index k = 0; k < 4; ++k) CHECK(len[k] == doctest::Approx(2.0 - 2.0 * std::cos(std::numbers::pi * k / 2.0)));

    const double theta = 0.7;
    const Cocycle so3 = catalog::free_so3(theta, 1);
    const WordBall* ball = so3.group.ball();
    REQUIRE(ball);
    const auto a1 = ball->find(Word{1});
    REQUIRE(a1);
    CHECK(so3.lengths()[*a1] == doctest::Approx(4.0 * (1.0 - std::cos(theta))));
    std::string warning;
    catalog::free_so3(0.0, 1, &warning);
    CHECK_FALSE(warning.empty());

    const Cocycle h = catalog::haagerup(2, 2);
    const WordBall* hb = h.group.ball();
    REQUIRE(hb);
    const auto g = hb->find(Word{1, 2});
    const auto gh = hb->find(Word{1, 2, 1});
    CHECK_FALSE(gh.has_value());  // outside the radius-2 ball
    const Cocycle h3 = catalog::haagerup(2, 3);
    const auto g3 = h3.group.ball()->find(Word{1, 2});
    const auto gh3 = h3.group.ball()->find(Word{1, 2, 1});
    REQUIRE(g3);
    REQUIRE(gh3);
    CHECK(h3.gram(static_cast<Eigen::Index>(*g3), static_cast<Eigen::Index>(*gh3)) == doctest::Approx(2.0));
    REQUIRE(g);
    CHECK(h.lengths()[*g] == doctest::Approx(2.0));
  }

  TEST_CASE("catalog cocycles satisfy the round trip") {
    for (const auto& c : catalog_cocycles()) {
      CAPTURE(c.kind);
      const CocycleResiduals r = cocycle_residuals(c);
      CHECK(r.length <= 1e-10);
      CHECK(r.law <= 1e-8);
      CHECK(r.orthogonality <= 1e-8);
      if (c.group.complete()) {
        const Cocycle rebuilt = build_cocycle(induced_length(c));
        CHECK((rebuilt.gram - gromov_form(induced_length(c))).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(cocycle_residuals(rebuilt).length <= 1e-10);
      }
    }
  }

  TEST_CASE("standard-cocycle additivity on Z_n") {
    CHECK_FALSE(is_additive(catalog::zn_roots(6)));
    const std::vector<double> gamma = {0.3};
    CHECK(is_additive(catalog::directional(gamma, 6)));
    const Cocycle z = catalog::zn_roots(9);
    CHECK(distinct_actions(z) <= 9);
  }

  TEST_CASE("action invariance on random vectors") {
    Rng rng(derive_seed(2, "action"));
    for (const auto& c : catalog_cocycles()) {
      if (!c.has_action() || c.dim == 0) continue;
      for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd x(c.dim), y(c.dim);
        for (Index k = 0; k < c.dim; ++k) {
          x[k] = rng.normal();
          y[k] = rng.normal();
        }
        const auto& a = c.alpha[rng.index(c.alpha.size())];
        CHECK(std::abs((a * x).dot(a * y) - x.dot(y)) <= 1e-9 * (1.0 + x.norm() * y.norm()));
      }
    }
  }

  TEST_CASE("random certified lengths") {
    auto d5 = std::make_shared<const FiniteGroup>(build_dihedral(5));
    for (int i = 0; i < 10; ++i) {
      Rng rng(derive_seed(9, "rand-psi", i));
      const LengthFunction psi = catalog::random_length(d5, rng);
      CHECK(oracle::cn_min_eig(*d5, psi.values()) >= -1e-9);
      CHECK(is_conditionally_negative(psi).pass);
      CHECK(psi.max_value() == doctest::Approx(4.0));
    }
  }
}
