#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/catalog.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/expr.hpp"
#include "cocycle_lab/multiplier.hpp"
#include "cocycle_lab/random.hpp"
#include "golden.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace cocycle_lab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

namespace {

LiftedProfile profile_of(const std::string& text, int n) {
  const SymbolExpr e = SymbolExpr::parse(text, n);
  return [e](std::span<const double> xi) { return e(xi); };
}

}  // namespace

TEST_SUITE("multipliers") {
  TEST_CASE("explicit symbols") {
    const LengthFunction psi = induced_length(catalog::zn_roots(4));
    auto g = psi.group().finite_ptr();
    Rng rng(derive_seed(1, "apply"));
    const AlgebraElement f = AlgebraElement::random(g, rng);
    CHECK((apply(explicit_symbol(psi.group(), Eigen::VectorXcd::Ones(4)), f).coeffs() - f.coeffs()).norm() == 0.0);

    Eigen::VectorXcd trace_part = Eigen::VectorXcd::Zero(4);
    trace_part[0] = 1.0;
    const AlgebraElement t = apply(explicit_symbol(psi.group(), trace_part), f);
    CHECK((t.coeffs() - AlgebraElement::lambda(g, 0, f[0]).coeffs()).norm() == 0.0);
    CHECK((t.coeffs() - conditional_expectation_g0(psi, f).coeffs()).norm() == 0.0);

    const Eigen::VectorXcd m1 = Eigen::VectorXcd::Random(4), m2 = Eigen::VectorXcd::Random(4);
    const AlgebraElement comp = apply(explicit_symbol(psi.group(), m1), apply(explicit_symbol(psi.group(), m2), f));
    const AlgebraElement prod = apply(explicit_symbol(psi.group(), m1.cwiseProduct(m2)), f);
    CHECK((comp.coeffs() - prod.coeffs()).norm() <= 1e-12);
    CHECK_THROWS_AS(explicit_symbol(psi.group(), Eigen::VectorXcd::Ones(3)), Error);
  }

  TEST_CASE("Riesz symbols") {
    const Cocycle c = catalog::zn_roots(4);
    const MultiplierSymbol m = riesz_symbol(c, Eigen::Vector2d(1.0, 0.0));
    const cplx i(0.0, 1.0);
    const cplx expect[] = {0.0, i / std::sqrt(2.0), i, i / std::sqrt(2.0)};
    for (Index g = 0; g < 4; ++g) CHECK(std::abs(m.m[g] - expect[g]) <= 1e-12);
    CHECK(riesz_symbol(c, Eigen::Vector2d::Zero()).m.norm() == 0.0);
    CHECK_THROWS_AS(riesz_symbol(c, Eigen::Vector3d(1, 0, 0)), Error);

    Rng rng(derive_seed(2, "riesz"));
    const std::vector<Cocycle> cs = {catalog::zn_roots(7), catalog::heisenberg_roots(3), catalog::free_so3(1.0, 2)};
    for (const auto& cc : cs) {
      Eigen::VectorXd eta(cc.dim);
      for (Index k = 0; k < cc.dim; ++k) eta[k] = rng.normal();
      eta.normalize();
      CHECK(l2_norm_exact(riesz_symbol(cc, eta)) <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("radial, imaginary power and lifted symbols") {
    const Cocycle c = catalog::zn_roots(4);
    const LengthFunction psi = induced_length(c);
    const MultiplierSymbol one = radial_symbol(psi, [](double) { return cplx(1.0); });
    CHECK((one.m - Eigen::VectorXcd::Ones(4)).norm() == 0.0);
    const MultiplierSymbol ip = imaginary_power_symbol(psi, 0.7);
    CHECK(ip.m[0] == cplx(0.0));
    for (Index g = 1; g < 4; ++g) CHECK(std::abs(ip.m[g]) == doctest::Approx(1.0));
    const MultiplierSymbol sq = lifted_symbol(c, profile_of("r^2", 2));
    const double expect[] = {0, 2, 4, 2};
    for (Index g = 0; g < 4; ++g) CHECK(sq.m[g].real() == doctest::Approx(expect[g]));
    CHECK(is_radial(sq, psi));
    try {
      radial_symbol(psi, [](double x) { return cplx(x > 3.0 ? std::nan("") : x); });
      FAIL("expected symbol_evaluation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::symbol_evaluation);
    }

    // b(g) = b(h) forces m_g = m_h.
    const Cocycle h = catalog::heisenberg_roots(2);
    const MultiplierSymbol lm = lifted_symbol(h, profile_of("sin(x1) + x2 * x3 - x4", 4));
    for (Index a = 0; a < h.order(); ++a)
      for (Index b = 0; b < h.order(); ++b)
        if ((h.vec(a) - h.vec(b)).norm() < 1e-12) CHECK(std::abs(lm.m[a] - lm.m[b]) <= 1e-12);
  }

  TEST_CASE("Schur-Riesz residual") {
    const std::vector<double> gamma = {1.0, 2.0};
    const Cocycle dir = catalog::directional(gamma, 2);
    CHECK(schur_riesz_residual(dir, Eigen::VectorXd::Ones(1)) <= 1e-14);
    const Cocycle z4 = catalog::zn_roots(4);
    CHECK(schur_riesz_residual(z4, Eigen::Vector2d(0.3, -1.0)) <= 1e-10);
    CHECK(schur_riesz_residual(z4, Eigen::Vector2d::Zero()) == 0.0);
  }

  TEST_CASE("Lp norm search") {
    const LengthFunction psi = induced_length(catalog::zn_roots(6));
    const MultiplierSymbol c = explicit_symbol(psi.group(), Eigen::VectorXcd::Constant(6, cplx(0.0, -1.5)));
    for (double p : {1.0, 3.0, kInf}) {
      const LpSearchResult r = lp_norm_search(c, p, 2, 20, 5);
      CHECK(r.lower_bound == doctest::Approx(1.5).epsilon(1e-6));
    }
    Rng rng(derive_seed(3, "search"));
    for (int i = 0; i < 20; ++i) {
      Eigen::VectorXcd m(6);
      for (int k = 0; k < 6; ++k) m[k] = rng.complex_normal();
      const MultiplierSymbol s = explicit_symbol(psi.group(), m);
      const LpSearchResult r = lp_norm_search(s, 2.0, 2, 40, derive_seed(3, "trial", i));
      CHECK(r.lower_bound <= l2_norm_exact(s) + 1e-9);
      REQUIRE(r.witness.has_value());
      CHECK(r.per_trial.size() == 2);
    }
    CHECK_THROWS_AS(lp_norm_search(c, 0.5, 1, 1, 0), Error);
    CHECK_THROWS_AS(lp_norm_search(c, 2.0, 0, 1, 0), Error);

    const LpSearchResult a = lp_norm_search(c, 3.0, 2, 10, 99), b = lp_norm_search(c, 3.0, 2, 10, 99);
    CHECK(a.lower_bound == b.lower_bound);
  }

  TEST_CASE("Riesz on Z_4 at p = 4") {
    const MultiplierSymbol m = riesz_symbol(catalog::zn_roots(4), Eigen::Vector2d(1.0, 0.0));
    const LpSearchResult r = lp_norm_search(m, 4.0, 8, 300, 42);
    CHECK(r.lower_bound >= 1.0);
    CHECK(r.lower_bound <= 10.0);
    const auto g = golden::check("multipliers", "riesz_z4_p4_seed42", r.lower_bound, 1e-6);
    CHECK_MESSAGE(g.pass, g.message);
  }

  TEST_CASE("epsilon-free conditions") {
    const EpsilonFreeConditions z = epsilon_free_conditions(catalog::zn_roots(5));
    CHECK(z.abelian);
    CHECK(z.finite_action);
    const std::vector<double> gamma = {1.0};
    CHECK(epsilon_free_conditions(catalog::directional(gamma, 3)).lattice);
    const Cocycle d4 = catalog::linear_coboundary(std::make_shared<const FiniteGroup>(build_dihedral(4)),
                                                  catalog::dihedral_plane_rep(4), Eigen::Vector2d(1.0, 0.5));
    const EpsilonFreeConditions d = epsilon_free_conditions(d4);
    CHECK_FALSE(d.abelian);
    CHECK(d.distinct_actions == 8);
    const LengthFunction psi = induced_length(catalog::zn_roots(5));
    const MultiplierSymbol rad = radial_symbol(psi, [](double x) { return cplx(std::exp(-x)); });
    CHECK(epsilon_free_conditions(catalog::zn_roots(5), &rad).radial);
  }

  TEST_CASE("Mihlin checker") {
    MihlinOptions opt;
    opt.order = 0;
    const MihlinReport riesz = mihlin_check(profile_of("x1 / r", 2), 2, opt);
    REQUIRE(riesz.per_order.size() == 1);
    CHECK(riesz.per_order[0].sup <= 1.0 + 1e-12);
    CHECK(riesz.per_order[0].sup >= 0.95);
    CHECK(riesz.finite);

    opt.order = 3;
    const MihlinReport flat = mihlin_check(profile_of("2.5", 3), 3, opt);
    REQUIRE(flat.per_order.size() == 4);
    for (int k = 1; k <= 3; ++k) CHECK(flat.per_order[k].sup == 0.0);

    const MihlinReport dflt = mihlin_check(profile_of("x1", 4), 4);
    CHECK(dflt.order == 3);
    CHECK(dflt.directions >= 16);
    CHECK(dflt.shells == 25);

    MihlinOptions bad;
    bad.order = 7;
    CHECK_THROWS_AS(mihlin_check(profile_of("x1", 4), 4, bad), Error);

    const MihlinReport inf = mihlin_check(profile_of("1 / (r - 1)", 1), 1);
    CHECK_FALSE(inf.finite);
    CHECK_FALSE(inf.bad_point.empty());

    CHECK(mihlin_step(1, 1e-4) == 1e-4);
    CHECK(mihlin_step(4, 1e-4) >= std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0));
  }

  TEST_CASE("Mihlin sups match analytic derivatives in one dimension") {
    // m(x) = exp(-x^2): r |m'(r)| = 2 r^2 e^{-r^2}, r^2 |m''(r)| = r^2 |4 r^2 - 2| e^{-r^2}.
    MihlinOptions opt;
    opt.order = 2;
    const MihlinReport rep = mihlin_check(profile_of("exp(-x1^2)", 1), 1, opt);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < opt.shells; ++i) {
      const double r = std::pow(10.0, -3.0 + 6.0 * i / (opt.shells - 1));
      s1 = std::max(s1, 2.0 * r * r * std::exp(-r * r));
      s2 = std::max(s2, r * r * std::abs(4.0 * r * r - 2.0) * std::exp(-r * r));
    }
    CHECK(rep.per_order[1].sup == doctest::Approx(s1).epsilon(1e-6));
    CHECK(rep.per_order[2].sup == doctest::Approx(s2).epsilon(1e-6));
  }

  TEST_CASE("Mihlin report for the truncated power") {
    MihlinOptions opt;
    opt.order = 3;
    const MihlinReport r = mihlin_check(profile_of("r^0.5 * cutoff(r, 3, 4)", 4), 4, opt);
    CHECK(r.finite);
    REQUIRE(r.per_order.size() == 4);
    for (const auto& st : r.per_order) {
      CHECK(std::isfinite(st.sup));
      const auto g = golden::check("multipliers", "mihlin_truncated_power_order" + std::to_string(st.order), st.sup, 1e-6);
      CHECK_MESSAGE(g.pass, g.message);
    }
    // sup over order 0 is attained at r = 3 where the cutoff still equals 1.
    CHECK(r.per_order[0].sup <= std::sqrt(4.0) + 1e-12);
  }
}
