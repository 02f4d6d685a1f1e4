#pragma once

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/group.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/random.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace cocycle_lab {

// f = sum_g f^(g) lambda(g) in the group von Neumann algebra of a finite group.
class AlgebraElement {
 public:
  AlgebraElement(std::shared_ptr<const FiniteGroup> group, Eigen::VectorXcd coeffs);

  static AlgebraElement zero(std::shared_ptr<const FiniteGroup> group);
  static AlgebraElement lambda(std::shared_ptr<const FiniteGroup> group, Index g, cplx c = 1.0);
  // Independent standard complex gaussian coefficients.
  static AlgebraElement random(std::shared_ptr<const FiniteGroup> group, Rng& rng);

  const FiniteGroup& group() const { return *group_; }
  const std::shared_ptr<const FiniteGroup>& group_ptr() const { return group_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }
  cplx operator[](Index g) const { return coeffs_[static_cast<Eigen::Index>(g)]; }
  Index size() const { return static_cast<Index>(coeffs_.size()); }

  // tau(f) = f^(e)
  cplx trace() const { return coeffs_[0]; }
  // f^*(g) = conj(f^(g^-1))
  AlgebraElement adjoint() const;
  bool same_group(const AlgebraElement& other) const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(cplx s);

 private:
  std::shared_ptr<const FiniteGroup> group_;
  Eigen::VectorXcd coeffs_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(cplx s, AlgebraElement a);

// (f1 f2)^(g) = sum_h f1^(h) f2^(h^-1 g)
AlgebraElement convolve(const AlgebraElement& f1, const AlgebraElement& f2);
inline AlgebraElement operator*(const AlgebraElement& f1, const AlgebraElement& f2) { return convolve(f1, f2); }
inline AlgebraElement adjoint(const AlgebraElement& f) { return f.adjoint(); }

// Left multiplication by f on l2(G): [lambda(g)]_{gh, h} = 1.
Eigen::MatrixXcd to_matrix(const AlgebraElement& f);

// (tau |f|^p)^{1/p} with the normalized trace; p = inf is the operator norm.
double lp_norm(const AlgebraElement& f, double p);

// Throws Error{validation} when psi and f live on different groups.
void require_same_group(const LengthFunction& psi, const AlgebraElement& f);

// lambda(g) -> exp(-t psi(g)) lambda(g)
AlgebraElement semigroup_apply(const LengthFunction& psi, double t, const AlgebraElement& f);

struct BmoReport {
  double column = 0.0;
  double row = 0.0;
  double max = 0.0;
  std::vector<double> t_grid;
  std::vector<double> column_min_eig;  // min eigenvalue of S_t(f*f) - (S_t f)*(S_t f)
  std::vector<double> row_min_eig;     // same for f*
  double column_argmax_t = 0.0;
  double row_argmax_t = 0.0;
  // The supremum was attained at an end of the grid, so the grid may underestimate it.
  bool boundary_argmax = false;
};

// 25 log-spaced points in [1e-4, 1e4].
std::vector<double> default_bmo_grid();

BmoReport bmo_norm(const LengthFunction& psi, const AlgebraElement& f, const std::vector<double>& t_grid,
                   double psd_tol = 1e-8);

// Elements of G_0 = {psi = 0}; throws Error{validation} unless G_0 is a subgroup.
std::vector<Index> vanishing_subgroup(const LengthFunction& psi);

AlgebraElement conditional_expectation_g0(const LengthFunction& psi, const AlgebraElement& f);
AlgebraElement project_j(const LengthFunction& psi, const AlgebraElement& f);

}  // namespace cocycle_lab
