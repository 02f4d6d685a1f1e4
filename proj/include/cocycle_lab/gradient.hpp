#pragma once

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/cocycle.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <vector>

namespace cocycle_lab {

// lambda(g) -> psi(g)^s lambda(g). For s < 0 the input must vanish on G_0.
AlgebraElement generator_apply(const LengthFunction& psi, const AlgebraElement& f, double s);

// Gamma(f1, f2) = (A(f1^*) f2 + f1^* A(f2) - A(f1^* f2)) / 2
AlgebraElement gamma_generator(const LengthFunction& psi, const AlgebraElement& f1, const AlgebraElement& f2);

// Gamma(f1, f2) = sum_{g,h} conj(f1^(g)) f2^(h) <b(g), b(h)> lambda(g^-1 h)
AlgebraElement gamma_gram(const Cocycle& c, const AlgebraElement& f1, const AlgebraElement& f2);

// Checks that c is a left cocycle of psi on the same group.
void require_cocycle_of(const Cocycle& c, const LengthFunction& psi, double tol = 1e-8);

// ‖Gamma(f, f)^{1/2}‖_p from the eigenvalues of the positive matrix Gamma(f, f).
double gamma_sqrt_norm(const AlgebraElement& gamma, double p);
double min_eigenvalue(const AlgebraElement& selfadjoint);

// Random trigonometric polynomial: complex gaussian coefficients off G_0,
// normalized in L_2.
AlgebraElement random_polynomial(const LengthFunction& psi, Rng& rng);

struct MeyerStats {
  double p = 2.0;
  std::vector<double> ratios;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

// r(f) = ‖A^{1/2} f‖_p / max(‖Gamma(f,f)^{1/2}‖_p, ‖Gamma(f*,f*)^{1/2}‖_p).
double meyer_ratio_of(const LengthFunction& psi, const AlgebraElement& f, double p);
MeyerStats meyer_ratio(const LengthFunction& psi, double p, int samples, std::uint64_t seed);

// sum_g B(W_g) lambda(g) in L_inf(Omega) x| G, with B extended complex-linearly.
class DerivationElement {
 public:
  DerivationElement(std::shared_ptr<const Cocycle> cocycle, Eigen::MatrixXcd w);

  const Cocycle& cocycle() const { return *cocycle_; }
  const std::shared_ptr<const Cocycle>& cocycle_ptr() const { return cocycle_; }
  const Eigen::MatrixXcd& terms() const { return w_; }  // order x dim
  Index order() const { return static_cast<Index>(w_.rows()); }
  bool is_zero() const { return w_.isZero(0.0); }

  DerivationElement& operator+=(const DerivationElement& other);
  DerivationElement& operator*=(cplx s);

 private:
  std::shared_ptr<const Cocycle> cocycle_;
  Eigen::MatrixXcd w_;
};

DerivationElement operator+(DerivationElement a, const DerivationElement& b);
DerivationElement operator*(cplx s, DerivationElement a);

// delta(lambda(g)) = B(b(g)) lambda(g). The cocycle must be a left cocycle with action.
DerivationElement delta(std::shared_ptr<const Cocycle> c, const AlgebraElement& f);

// D f and f D inside the crossed product; lambda(h) B(v) = B(alpha_h v) lambda(h).
DerivationElement right_multiply(const DerivationElement& d, const AlgebraElement& f);
DerivationElement left_multiply(const AlgebraElement& f, const DerivationElement& d);

// E(D1^* D2) by the covariance rule E[B(a) B(b)] = sum_j a_j b_j.
AlgebraElement expect_adjoint_product(const DerivationElement& d1, const DerivationElement& d2);

// E(B(eta)^* D) = sum_h <eta, W_h> lambda(h).
AlgebraElement expect_gaussian_contraction(const Eigen::VectorXd& eta, const DerivationElement& d);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double mean_power = 0.0;  // E (1/N) tr |M(z)|^p
  int samples = 0;
};

// ‖D‖_p in L_p(L_inf(Omega) x| G) with M(z)[g, h] = <z, alpha_{g^-1} W_{g h^-1}>.
MonteCarloEstimate crossed_lp_montecarlo(const DerivationElement& d, double p, int num_z, std::uint64_t seed);

struct KhintchineBand {
  double mc_norm = 0.0;
  double std_error = 0.0;
  double rc_norm = 0.0;
  double ratio = 1.0;
  bool pass = true;  // mc >= rc (1 - 4 se / rc)
};

KhintchineBand khintchine_band(const LengthFunction& psi, std::shared_ptr<const Cocycle> c, const AlgebraElement& f,
                               double p, int num_z, std::uint64_t seed);

struct CovarianceCheck {
  double empirical = 0.0;
  double exact = 0.0;
  double std_error = 0.0;
  bool pass = false;  // within 4 standard errors
};

// Empirical mean of B(v) B(w) over gaussian samples z against <v, w>.
CovarianceCheck gaussian_covariance_check(const Eigen::VectorXd& v, const Eigen::VectorXd& w, int samples,
                                          std::uint64_t seed);

}  // namespace cocycle_lab
