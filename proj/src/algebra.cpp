#include "cocycle_lab/algebra.hpp"

#include "cocycle_lab/error.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle_lab {

AlgebraElement::AlgebraElement(std::shared_ptr<const FiniteGroup> group, Eigen::VectorXcd coeffs)
    : group_(std::move(group)), coeffs_(std::move(coeffs)) {
  if (!group_) throw Error(ErrorKind::validation, "algebra element without a group");
  if (static_cast<Index>(coeffs_.size()) != group_->order()) {
    throw Error(ErrorKind::validation, "coefficient vector length differs from the group order");
  }
}

AlgebraElement AlgebraElement::zero(std::shared_ptr<const FiniteGroup> group) {
  const auto n = static_cast<Eigen::Index>(group->order());
  return AlgebraElement(std::move(group), Eigen::VectorXcd::Zero(n));
}

AlgebraElement AlgebraElement::lambda(std::shared_ptr<const FiniteGroup> group, Index g, cplx c) {
  if (g >= group->order()) throw Error(ErrorKind::invalid_parameter, "element index out of range");
  AlgebraElement out = zero(std::move(group));
  out.coeffs_[static_cast<Eigen::Index>(g)] = c;
  return out;
}

AlgebraElement AlgebraElement::random(std::shared_ptr<const FiniteGroup> group, Rng& rng) {
  AlgebraElement out = zero(std::move(group));
  for (Eigen::Index i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = rng.complex_normal();
  return out;
}

bool AlgebraElement::same_group(const AlgebraElement& other) const {
  return group_ == other.group_ || group_->same_table(*other.group_);
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement out = zero(group_);
  for (Index g = 0; g < size(); ++g) {
    out.coeffs_[static_cast<Eigen::Index>(g)] = std::conj(coeffs_[static_cast<Eigen::Index>(group_->inv(g))]);
  }
  return out;
}

namespace {
void require_same(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.same_group(b)) throw Error(ErrorKind::validation, "algebra elements live on different groups");
}
}  // namespace

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same(*this, other);
  coeffs_ += other.coeffs_;
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same(*this, other);
  coeffs_ -= other.coeffs_;
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
  coeffs_ *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }

AlgebraElement convolve(const AlgebraElement& f1, const AlgebraElement& f2) {
  require_same(f1, f2);
  const FiniteGroup& g = f1.group();
  const Index n = g.order();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (Index h = 0; h < n; ++h) {
    const cplx a = f1[h];
    if (a == cplx(0.0)) continue;
    for (Index k = 0; k < n; ++k) out[static_cast<Eigen::Index>(g.mul(h, k))] += a * f2[k];
  }
  return AlgebraElement(f1.group_ptr(), std::move(out));
}

Eigen::MatrixXcd to_matrix(const AlgebraElement& f) {
  const FiniteGroup& g = f.group();
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Index a = 0; a < g.order(); ++a) {
    const cplx c = f[a];
    if (c == cplx(0.0)) continue;
    for (Index h = 0; h < g.order(); ++h) m(static_cast<Eigen::Index>(g.mul(a, h)), static_cast<Eigen::Index>(h)) += c;
  }
  return m;
}

double lp_norm(const AlgebraElement& f, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_parameter, "L_p norm needs p >= 1");
  return linalg::normalized_schatten(to_matrix(f), p);
}

void require_same_group(const LengthFunction& psi, const AlgebraElement& f) {
  const FiniteGroup* g = psi.group().finite();
  if (!g || !(g == &f.group() || g->same_table(f.group()))) {
    throw Error(ErrorKind::validation, "length function and element live on different groups");
  }
}

AlgebraElement semigroup_apply(const LengthFunction& psi, double t, const AlgebraElement& f) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_parameter, "semigroup time must be >= 0");
  require_same_group(psi, f);
  AlgebraElement out = f;
  for (Index g = 0; g < f.size(); ++g) out.coeffs()[static_cast<Eigen::Index>(g)] *= std::exp(-t * psi[g]);
  return out;
}

std::vector<double> default_bmo_grid() {
  std::vector<double> t(25);
  for (int k = 0; k < 25; ++k) t[k] = std::pow(10.0, -4.0 + 8.0 * k / 24.0);
  return t;
}

namespace {

struct Deviation {
  double norm = 0.0;
  double min_eig = 0.0;
};

// S_t(f*f) - (S_t f)*(S_t f), via its matrix on l2(G).
Deviation deviation(const LengthFunction& psi, double t, const AlgebraElement& f) {
  const AlgebraElement sf = semigroup_apply(psi, t, f);
  const AlgebraElement d = semigroup_apply(psi, t, f.adjoint() * f) - sf.adjoint() * sf;
  const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(to_matrix(d));
  return {std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff())), ev.minCoeff()};
}

}  // namespace

BmoReport bmo_norm(const LengthFunction& psi, const AlgebraElement& f, const std::vector<double>& t_grid,
                   double psd_tol) {
  if (t_grid.empty()) throw Error(ErrorKind::invalid_parameter, "BMO time grid is empty");
  for (double t : t_grid)
    if (!(t > 0.0)) throw Error(ErrorKind::invalid_parameter, "BMO times must be positive");
  require_same_group(psi, f);

  BmoReport rep;
  rep.t_grid = t_grid;
  const AlgebraElement fs = f.adjoint();
  std::size_t col_arg = 0, row_arg = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const Deviation col = deviation(psi, t_grid[i], f);
    const Deviation row = deviation(psi, t_grid[i], fs);
    rep.column_min_eig.push_back(col.min_eig);
    rep.row_min_eig.push_back(row.min_eig);
    if (col.min_eig < -psd_tol || row.min_eig < -psd_tol) {
      throw Error(ErrorKind::numerical_inconsistency,
                  "Kadison-Schwarz deviation is not positive at t = " + std::to_string(t_grid[i]) +
                      " (min eigenvalue " + std::to_string(std::min(col.min_eig, row.min_eig)) +
                      "); psi is probably not conditionally negative");
    }
    const double c = std::sqrt(col.norm), r = std::sqrt(row.norm);
    if (c > rep.column) {
      rep.column = c;
      col_arg = i;
    }
    if (r > rep.row) {
      rep.row = r;
      row_arg = i;
    }
  }
  rep.max = std::max(rep.column, rep.row);
  rep.column_argmax_t = t_grid[col_arg];
  rep.row_argmax_t = t_grid[row_arg];
  const std::size_t last = t_grid.size() - 1;
  const std::size_t arg = rep.column >= rep.row ? col_arg : row_arg;
  rep.boundary_argmax = rep.max > 0.0 && (arg == 0 || arg == last);
  return rep;
}

std::vector<Index> vanishing_subgroup(const LengthFunction& psi) {
  const FiniteGroup* g = psi.group().finite();
  if (!g) throw Error(ErrorKind::validation, "G_0 needs a finite group");
  std::vector<Index> members;
  std::vector<char> in(g->order(), 0);
  for (Index x = 0; x < g->order(); ++x)
    if (psi.vanishes_at(x)) {
      members.push_back(x);
      in[x] = 1;
    }
  for (Index a : members)
    for (Index b : members)
      if (!in[g->mul(a, b)]) throw Error(ErrorKind::validation, "G_0 = {psi = 0} is not closed under products");
  return members;
}

AlgebraElement conditional_expectation_g0(const LengthFunction& psi, const AlgebraElement& f) {
  require_same_group(psi, f);
  const auto members = vanishing_subgroup(psi);
  AlgebraElement out = AlgebraElement::zero(f.group_ptr());
  for (Index g : members) out.coeffs()[static_cast<Eigen::Index>(g)] = f[g];
  return out;
}

AlgebraElement project_j(const LengthFunction& psi, const AlgebraElement& f) {
  return f - conditional_expectation_g0(psi, f);
}

}  // namespace cocycle_lab
