#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/catalog.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/gradient.hpp"
#include "cocycle_lab/multiplier.hpp"
#include "cocycle_lab/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace cocycle_lab;

namespace {

std::vector<std::shared_ptr<const Cocycle>> finite_cocycles() {
  std::vector<std::shared_ptr<const Cocycle>> cs;
  auto add = [&](Cocycle c) { cs.push_back(std::make_shared<const Cocycle>(std::move(c))); };
  add(catalog::zn_roots(8));
  add(catalog::heisenberg_roots(2));
  auto d4 = std::make_shared<const FiniteGroup>(build_dihedral(4));
  add(catalog::linear_coboundary(d4, catalog::dihedral_plane_rep(4), Eigen::Vector2d(1.0, 0.5)));
  auto s3 = std::make_shared<const FiniteGroup>(build_symmetric(3));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
  v[0] = 1.0;
  v[4] = 0.5;
  add(catalog::regular_coboundary(s3, v));
  auto prod = std::make_shared<const FiniteGroup>(build_product(build_cyclic(2), build_cyclic(3)));
  add(catalog::direct_sum(prod, catalog::zn_roots(2), catalog::zn_roots(3)));
  return cs;
}

}  // namespace

TEST_SUITE("gradient-riesz") {
  TEST_CASE("powers of the generator") {
    const LengthFunction psi = induced_length(catalog::zn_roots(4));
    auto g = psi.group().finite_ptr();
    Rng rng(derive_seed(1, "gen"));
    const AlgebraElement jf = project_j(psi, AlgebraElement::random(g, rng));
    CHECK((generator_apply(psi, jf, 0.0).coeffs() - jf.coeffs()).norm() == 0.0);
    const AlgebraElement two = generator_apply(psi, AlgebraElement::lambda(g, 2), 0.5);
    CHECK(two[2].real() == doctest::Approx(2.0));
    const AlgebraElement back = generator_apply(psi, generator_apply(psi, jf, -0.5), 0.5);
    CHECK((back.coeffs() - jf.coeffs()).norm() <= 1e-12);
    CHECK_THROWS_AS(generator_apply(psi, AlgebraElement::lambda(g, 0), -0.5), Error);
  }

  TEST_CASE("gradient form identities") {
    for (const auto& c : finite_cocycles()) {
      CAPTURE(c->kind);
      const LengthFunction psi = induced_length(*c);
      auto g = psi.group().finite_ptr();
      for (Index x = 0; x < g->order(); ++x) {
        const AlgebraElement l = AlgebraElement::lambda(g, x);
        const AlgebraElement gam = gamma_generator(psi, l, l);
        CHECK(std::abs(gam[0] - psi[x]) <= 1e-12);
        CHECK(gam.coeffs().tail(g->order() - 1).norm() <= 1e-12);
      }
      CHECK(gamma_generator(psi, AlgebraElement::lambda(g, 0, 3.0), AlgebraElement::lambda(g, 0, 3.0)).coeffs().norm() ==
            0.0);

      Rng rng(derive_seed(2, c->kind));
      for (int i = 0; i < 100; ++i) {
        const AlgebraElement f1 = AlgebraElement::random(g, rng), f2 = AlgebraElement::random(g, rng);
        const AlgebraElement a = gamma_generator(psi, f1, f2), b = gamma_gram(*c, f1, f2);
        CHECK((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() <= 1e-10);
        const AlgebraElement gff = gamma_generator(psi, f1, f1);
        double expect = 0.0;
        for (Index x = 0; x < g->order(); ++x) expect += psi[x] * std::norm(f1[x]);
        CHECK(std::abs(gff.trace() - expect) <= 1e-10 * (1.0 + expect));
        CHECK(min_eigenvalue(gff) >= -1e-9);
        const double a2 = generator_apply(psi, f1, 0.5).coeffs().squaredNorm();
        CHECK(std::abs(a2 - gff.trace().real()) <= 1e-10 * (1.0 + a2));
      }
    }
  }

  TEST_CASE("gamma_gram needs the matching cocycle") {
    const LengthFunction psi = induced_length(catalog::zn_roots(6));
    const Cocycle other = catalog::zn_roots(6);
    CHECK_NOTHROW(require_cocycle_of(other, psi));
    const LengthFunction scaled(psi.group(), std::vector<double>{0, 2, 6, 8, 6, 2});
    CHECK_THROWS_AS(require_cocycle_of(other, scaled), Error);
  }

  TEST_CASE("Meyer ratios") {
    for (const auto& c : finite_cocycles()) {
      const LengthFunction psi = induced_length(*c);
      auto g = psi.group().finite_ptr();
      for (Index x = 1; x < g->order(); ++x) {
        if (psi.vanishes_at(x)) continue;
        for (double p : {2.0, 3.0, 4.0}) CHECK(meyer_ratio_of(psi, AlgebraElement::lambda(g, x), p) == doctest::Approx(1.0).epsilon(1e-12));
      }
      const MeyerStats st = meyer_ratio(psi, 2.0, 50, 3);
      CHECK(std::abs(st.max - 1.0) <= 1e-6);
      CHECK(std::abs(st.min - 1.0) <= 1e-6);
      CHECK(st.ratios.size() == 50);
    }
    const LengthFunction z8 = induced_length(catalog::zn_roots(8));
    const MeyerStats a = meyer_ratio(z8, 4.0, 30, 11), b = meyer_ratio(z8, 4.0, 30, 11);
    CHECK(a.ratios == b.ratios);
    CHECK(a.max / a.min <= 50.0);
  }

  TEST_CASE("gaussian derivation") {
    auto c = std::make_shared<const Cocycle>(catalog::zn_roots(6));
    const LengthFunction psi = induced_length(*c);
    auto g = psi.group().finite_ptr();
    CHECK(delta(c, AlgebraElement::lambda(g, 0)).is_zero());
    const DerivationElement d2 = delta(c, AlgebraElement::lambda(g, 2, 3.0));
    CHECK((d2.terms().row(2).transpose() - 3.0 * c->vec(2).cast<cplx>()).norm() <= 1e-15);
    CHECK(d2.terms().norm() == doctest::Approx(3.0 * c->vec(2).norm()));

    Rng rng(derive_seed(4, "lin"));
    const AlgebraElement f1 = AlgebraElement::random(g, rng), f2 = AlgebraElement::random(g, rng);
    const cplx s(0.3, -1.2);
    const DerivationElement lhs = delta(c, f1 + s * f2);
    const DerivationElement rhs = delta(c, f1) + s * delta(c, f2);
    CHECK((lhs.terms() - rhs.terms()).norm() <= 1e-12);

    // Leibniz rule: delta(f1 f2) = delta(f1) f2 + f1 delta(f2).
    const DerivationElement leib = right_multiply(delta(c, f1), f2) + left_multiply(f1, delta(c, f2));
    CHECK((delta(c, f1 * f2).terms() - leib.terms()).norm() <= 1e-10);

    // E(delta f^* delta f) = Gamma(f, f).
    const AlgebraElement e = expect_adjoint_product(delta(c, f1), delta(c, f1));
    CHECK((e.coeffs() - gamma_generator(psi, f1, f1).coeffs()).cwiseAbs().maxCoeff() <= 1e-10);
  }

  TEST_CASE("Riesz transform from the gaussian derivation") {
    for (const auto& c : finite_cocycles()) {
      const LengthFunction psi = induced_length(*c);
      auto g = psi.group().finite_ptr();
      Rng rng(derive_seed(5, c->kind));
      Eigen::VectorXd eta(c->dim);
      for (Index k = 0; k < c->dim; ++k) eta[k] = rng.normal();
      const AlgebraElement f = project_j(psi, AlgebraElement::random(g, rng));
      const AlgebraElement direct = apply(riesz_symbol(*c, eta), f);
      const AlgebraElement via =
          cplx(0.0, -1.0) * expect_gaussian_contraction(eta, delta(c, generator_apply(psi, f, -0.5)));
      CHECK((direct.coeffs() - via.coeffs()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("crossed-product Monte Carlo") {
    auto c = std::make_shared<const Cocycle>(catalog::zn_roots(5));
    const LengthFunction psi = induced_length(*c);
    auto g = psi.group().finite_ptr();
    const DerivationElement zero = delta(c, AlgebraElement::lambda(g, 0));
    CHECK(crossed_lp_montecarlo(zero, 3.0, 200, 1).estimate == 0.0);
    CHECK_THROWS_AS(crossed_lp_montecarlo(zero, 3.0, 50, 1), Error);

    Rng rng(derive_seed(6, "mc"));
    const AlgebraElement f = AlgebraElement::random(g, rng);
    const double exact = std::sqrt(gamma_generator(psi, f, f).trace().real());
    const MonteCarloEstimate est = crossed_lp_montecarlo(delta(c, f), 2.0, 100000, 17);
    CHECK(est.samples == 100000);
    CHECK(std::abs(est.estimate - exact) <= 4.0 * est.std_error);

    const MonteCarloEstimate single = crossed_lp_montecarlo(delta(c, AlgebraElement::lambda(g, 2)), 2.0, 100000, 18);
    CHECK(std::abs(single.estimate - std::sqrt(psi[2])) <= 4.0 * single.std_error);

    const MonteCarloEstimate a = crossed_lp_montecarlo(delta(c, f), 4.0, 1000, 3), b = crossed_lp_montecarlo(delta(c, f), 4.0, 1000, 3);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error > 0.0);
  }

  TEST_CASE("Khintchine band") {
    auto c = std::make_shared<const Cocycle>(catalog::heisenberg_roots(2));
    const LengthFunction psi = induced_length(*c);
    auto g = psi.group().finite_ptr();
    const KhintchineBand centre = khintchine_band(psi, c, AlgebraElement::lambda(g, 1), 4.0, 500, 1);
    CHECK(centre.mc_norm == 0.0);
    CHECK(centre.rc_norm == 0.0);

    Rng rng(derive_seed(7, "band"));
    const AlgebraElement f = random_polynomial(psi, rng);
    const KhintchineBand b2 = khintchine_band(psi, c, f, 2.0, 20000, 2);
    CHECK(b2.pass);
    CHECK(std::abs(b2.ratio - 1.0) <= 4.0 * b2.std_error / b2.rc_norm);
    const KhintchineBand b4 = khintchine_band(psi, c, f, 4.0, 20000, 3);
    CHECK(b4.pass);
    CHECK(std::isfinite(b4.ratio));
  }

  TEST_CASE("gaussian covariance rule") {
    const Eigen::Vector3d v(1.0, -2.0, 0.5), w(0.3, 0.1, 2.0);
    const CovarianceCheck cc = gaussian_covariance_check(v, w, 50000, 9);
    CHECK(cc.exact == doctest::Approx(v.dot(w)));
    CHECK(cc.pass);
  }
}
