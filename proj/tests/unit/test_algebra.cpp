#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/catalog.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/io.hpp"
#include "cocycle_lab/random.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace cocycle_lab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

namespace {

std::shared_ptr<const FiniteGroup> share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

std::vector<std::shared_ptr<const FiniteGroup>> groups() {
  return {share(build_cyclic(6)), share(build_dihedral(4)), share(build_symmetric(3)), share(build_heisenberg_mod(2))};
}

}  // namespace

TEST_SUITE("vna-numerics") {
  TEST_CASE("regular representation rules") {
    for (const auto& g : groups()) {
      for (Index a = 0; a < g->order(); ++a) {
        for (Index b = 0; b < g->order(); ++b) {
          const AlgebraElement p = AlgebraElement::lambda(g, a) * AlgebraElement::lambda(g, b);
          CHECK((p.coeffs() - AlgebraElement::lambda(g, g->mul(a, b)).coeffs()).norm() == 0.0);
        }
        CHECK((AlgebraElement::lambda(g, a).adjoint().coeffs() - AlgebraElement::lambda(g, g->inv(a)).coeffs()).norm() ==
              0.0);
      }
    }
  }

  TEST_CASE("convolution on Z_6 matches the DFT route") {
    auto z6 = share(build_cyclic(6));
    Rng rng(derive_seed(1, "conv"));
    for (int trial = 0; trial < 10; ++trial) {
      const AlgebraElement f1 = AlgebraElement::random(z6, rng), f2 = AlgebraElement::random(z6, rng);
      std::vector<cplx> a(f1.coeffs().data(), f1.coeffs().data() + 6), b(f2.coeffs().data(), f2.coeffs().data() + 6);
      const auto fa = oracle::dft(a), fb = oracle::dft(b);
      std::vector<cplx> prod(6);
      for (int k = 0; k < 6; ++k) prod[k] = fa[k] * fb[k];
      const auto expect = oracle::idft(prod);
      const AlgebraElement c = f1 * f2;
      for (int k = 0; k < 6; ++k) CHECK(std::abs(c[k] - expect[k]) <= 1e-12);
    }
  }

  TEST_CASE("left-regular matrices") {
    auto z2 = share(build_cyclic(2));
    CHECK(to_matrix(AlgebraElement::lambda(z2, 0)).isApprox(Eigen::MatrixXcd::Identity(2, 2)));
    Eigen::MatrixXcd anti(2, 2);
    anti << 0, 1, 1, 0;
    CHECK(to_matrix(AlgebraElement::lambda(z2, 1)) == anti);

    Rng rng(derive_seed(2, "matrices"));
    for (const auto& g : groups()) {
      const AlgebraElement f1 = AlgebraElement::random(g, rng), f2 = AlgebraElement::random(g, rng);
      CHECK((to_matrix(f1 * f2) - to_matrix(f1) * to_matrix(f2)).norm() <= 1e-10);
      CHECK((to_matrix(f1.adjoint()) - to_matrix(f1).adjoint()).norm() <= 1e-12);
      CHECK(std::abs((f1 * f2).trace() - (f2 * f1).trace()) <= 1e-12);
      CHECK(std::abs(to_matrix(f1).trace() / double(g->order()) - f1.trace()) <= 1e-12);
    }
  }

  TEST_CASE("noncommutative Lp norms") {
    auto d4 = share(build_dihedral(4));
    for (double p : {1.0, 1.5, 2.0, 4.0, kInf})
      for (Index g = 0; g < d4->order(); ++g) CHECK(lp_norm(AlgebraElement::lambda(d4, g), p) == doctest::Approx(1.0));

    auto z2 = share(build_cyclic(2));
    const AlgebraElement s = AlgebraElement::lambda(z2, 0) + AlgebraElement::lambda(z2, 1);
    for (double p : {1.0, 2.0, 3.0, 7.5}) CHECK(lp_norm(s, p) == doctest::Approx(std::pow(2.0, 1.0 - 1.0 / p)));
    CHECK(lp_norm(s, kInf) == doctest::Approx(2.0));
    CHECK_THROWS_AS(lp_norm(s, 0.5), Error);

    Rng rng(derive_seed(3, "norms"));
    for (const auto& g : groups()) {
      for (int i = 0; i < 100; ++i) {
        const AlgebraElement f = AlgebraElement::random(g, rng);
        const double n2 = lp_norm(f, 2.0);
        CHECK(std::abs(n2 * n2 - f.coeffs().squaredNorm()) <= 1e-10 * (1.0 + n2 * n2));
        double prev = 0.0;
        for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, kInf}) {
          const double v = lp_norm(f, p);
          CHECK(v >= prev - 1e-12);
          prev = v;
        }
        if (i < 10) {
          const Index a = rng.index(g->order()), b = rng.index(g->order());
          const AlgebraElement t = AlgebraElement::lambda(g, a) * f * AlgebraElement::lambda(g, b);
          CHECK(lp_norm(t, 3.0) == doctest::Approx(lp_norm(f, 3.0)).epsilon(1e-12));
          CHECK(lp_norm(f.adjoint(), 3.0) == doctest::Approx(lp_norm(f, 3.0)).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("heat semigroup") {
    const Cocycle c = catalog::zn_roots(4);
    const LengthFunction psi = induced_length(c);
    auto g = psi.group().finite_ptr();
    Rng rng(derive_seed(4, "heat"));
    const AlgebraElement f = AlgebraElement::random(g, rng);
    CHECK((semigroup_apply(psi, 0.0, f).coeffs() - f.coeffs()).norm() == 0.0);
    const AlgebraElement s = semigroup_apply(psi, 1.0, AlgebraElement::lambda(g, 2));
    CHECK(s[2].real() == doctest::Approx(std::exp(-4.0)));
    CHECK_THROWS_AS(semigroup_apply(psi, -1.0, f), Error);
    const AlgebraElement other = AlgebraElement::lambda(share(build_cyclic(5)), 1);
    CHECK_THROWS_AS(semigroup_apply(psi, 1.0, other), Error);
  }

  TEST_CASE("BMO norms") {
    const LengthFunction psi = induced_length(catalog::zn_roots(8));
    auto g = psi.group().finite_ptr();
    const auto grid = default_bmo_grid();
    REQUIRE(grid.size() == 25);
    CHECK(grid.front() == doctest::Approx(1e-4));
    CHECK(grid.back() == doctest::Approx(1e4));
    for (Index k = 1; k < 8; ++k) {
      // Closed form: D_t = (1 - exp(-2 t psi)) * 1.
      double closed = 0.0;
      for (double t : grid) closed = std::max(closed, std::sqrt(1.0 - std::exp(-2.0 * t * psi[k])));
      const BmoReport r = bmo_norm(psi, AlgebraElement::lambda(g, k), grid);
      CHECK(r.column == doctest::Approx(closed).epsilon(1e-10));
      CHECK(r.row == doctest::Approx(closed).epsilon(1e-10));
      if (psi[k] >= 2.0) CHECK(r.max >= 0.999);
    }
    CHECK(bmo_norm(psi, AlgebraElement::lambda(g, 0, 3.0), grid).max <= 1e-12);

    const LengthFunction heis = induced_length(catalog::heisenberg_roots(2));
    auto h = heis.group().finite_ptr();
    const AlgebraElement centre = AlgebraElement::lambda(h, 1, 2.0) + AlgebraElement::lambda(h, 0, 0.5);
    CHECK(bmo_norm(heis, centre, grid).max <= 1e-12);
    const double empty[] = {0.0};
    CHECK_THROWS_AS(bmo_norm(psi, centre, std::vector<double>{}), Error);
    CHECK_THROWS_AS(bmo_norm(psi, AlgebraElement::lambda(g, 1), std::vector<double>(empty, empty + 1)), Error);
  }

  TEST_CASE("Kadison-Schwarz positivity") {
    Rng rng(derive_seed(5, "ks"));
    const std::vector<Cocycle> cs = {catalog::zn_roots(5), catalog::heisenberg_roots(2)};
    for (const auto& c : cs) {
      const LengthFunction psi = induced_length(c);
      for (int i = 0; i < 10; ++i) {
        const BmoReport r = bmo_norm(psi, AlgebraElement::random(psi.group().finite_ptr(), rng), default_bmo_grid());
        for (double e : r.column_min_eig) CHECK(e >= -1e-8);
        for (double e : r.row_min_eig) CHECK(e >= -1e-8);
      }
    }
  }

  TEST_CASE("conditional expectation onto G_0") {
    const LengthFunction psi = induced_length(catalog::zn_roots(6));
    auto g = psi.group().finite_ptr();
    Rng rng(derive_seed(6, "e0"));
    const AlgebraElement f = AlgebraElement::random(g, rng);
    const AlgebraElement e = conditional_expectation_g0(psi, f);
    CHECK(e[0] == f[0]);
    for (Index k = 1; k < 6; ++k) CHECK(e[k] == cplx(0.0));
    CHECK((project_j(psi, f) + e - f).coeffs().norm() <= 1e-15);

    const LengthFunction heis = induced_length(catalog::heisenberg_roots(3));
    auto h = heis.group().finite_ptr();
    const auto g0 = vanishing_subgroup(heis);
    // Kernel of (a, b, c) -> (b, c): indices a + 9*0 + ... with b = c = 0.
    CHECK(g0 == std::vector<Index>{0, 1, 2});
    const AlgebraElement fh = AlgebraElement::random(h, rng);
    const AlgebraElement eh = conditional_expectation_g0(heis, fh);
    for (Index x = 0; x < h->order(); ++x) CHECK(eh[x] == (x < 3 ? fh[x] : cplx(0.0)));
    CHECK((conditional_expectation_g0(heis, eh).coeffs() - eh.coeffs()).norm() <= 1e-12);
  }

  TEST_CASE("element json round trip") {
    auto g = share(build_dihedral(3));
    Rng rng(derive_seed(7, "json"));
    const AlgebraElement f = AlgebraElement::random(g, rng);
    const io::json j = io::element_to_json(f, "D3");
    CHECK(j["group_id"] == "D3");
    const AlgebraElement back = io::element_from_json(io::json::parse(j.dump()), g);
    CHECK((back.coeffs() - f.coeffs()).norm() == 0.0);
  }
}
