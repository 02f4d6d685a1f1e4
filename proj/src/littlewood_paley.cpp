#include "cocycle_lab/littlewood_paley.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cocycle_lab {

double default_bump(double s) { return smooth_cutoff(s, 1.0, 2.0) - smooth_cutoff(2.0 * s, 1.0, 2.0); }

DyadicFamily::DyadicFamily(Bump bump, std::string description, int m_min, int m_max, bool normalized)
    : bump_(std::move(bump)), description_(std::move(description)), m_min_(m_min), m_max_(m_max), normalized_(normalized) {
  if (m_max_ < m_min_) throw Error(ErrorKind::invalid_parameter, "dyadic family range is empty");
  if (m_max_ - m_min_ > 400) throw Error(ErrorKind::resource_limit, "dyadic family range exceeds 400 members");
}

double DyadicFamily::raw(int m, double x) const {
  if (x <= 0.0 || m < m_min_ || m > m_max_) return 0.0;
  return bump_(std::ldexp(std::sqrt(x), -m));
}

double DyadicFamily::sum_squares(double x) const {
  double s = 0.0;
  for (int m = m_min_; m <= m_max_; ++m) {
    const double h = raw(m, x);
    s += h * h;
  }
  return s;
}

double DyadicFamily::operator()(int m, double x) const {
  const double h = raw(m, x);
  if (!normalized_ || h == 0.0) return h;
  return h / std::sqrt(sum_squares(x));
}

namespace {

bool covers(const DyadicFamily& fam, const LengthFunction& psi) {
  for (Index g = 0; g < psi.size(); ++g)
    if (!psi.vanishes_at(g) && fam.sum_squares(psi[g]) <= 1e-24) return false;
  return true;
}

}  // namespace

DyadicFamily dyadic_family(const LengthFunction& psi, bool normalize, std::optional<std::pair<int, int>> range,
                           Bump bump, std::string description) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index g = 0; g < psi.size(); ++g) {
    if (psi.vanishes_at(g)) continue;
    lo = std::min(lo, psi[g]);
    hi = std::max(hi, psi[g]);
  }
  int m_min = 0, m_max = 0;
  if (hi > 0.0) {
    m_min = static_cast<int>(std::floor(std::log2(0.5 * std::sqrt(lo))));
    m_max = static_cast<int>(std::ceil(std::log2(2.0 * std::sqrt(hi))));
  }
  const bool requested = range.has_value();
  if (requested) {
    m_min = range->first;
    m_max = range->second;
  }
  DyadicFamily fam(bump, description, m_min, m_max, normalize);
  int widen = 0;
  while (!covers(fam, psi)) {
    if (++widen > 64) throw Error(ErrorKind::invalid_parameter, "bump does not cover the psi values after widening");
    fam = DyadicFamily(bump, description, fam.m_min() - 1, fam.m_max() + 1, normalize);
  }
  if (widen > 0) {
    fam.extended = true;
    fam.note = "range widened to [" + std::to_string(fam.m_min()) + ", " + std::to_string(fam.m_max()) +
               "] to cover all psi values";
  }
  return fam;
}

AlgebraElement dyadic_piece(const LengthFunction& psi, const DyadicFamily& family, int m, const AlgebraElement& f) {
  require_same_group(psi, f);
  AlgebraElement out = f;
  for (Index g = 0; g < f.size(); ++g) {
    const double h = psi.vanishes_at(g) ? 0.0 : family(m, psi[g]);
    out.coeffs()[static_cast<Eigen::Index>(g)] *= h;
  }
  return out;
}

namespace {

struct SqrtNorm {
  double norm = 0.0;
  double min_eig = 0.0;
};

SqrtNorm psd_sqrt_norm(const Eigen::MatrixXcd& s, double p) {
  const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(s);
  const double scale = std::max(1.0, std::abs(ev.maxCoeff()));
  if (ev.minCoeff() < -1e-10 * scale) {
    throw Error(ErrorKind::numerical_inconsistency,
                "square-function sum is not positive (min eigenvalue " + std::to_string(ev.minCoeff()) + ")");
  }
  Eigen::VectorXd sv = ev.cwiseMax(0.0).cwiseSqrt();
  return {linalg::normalized_schatten(sv, p), ev.minCoeff()};
}

}  // namespace

SquareFunctionNorms square_function_norms(const LengthFunction& psi, const DyadicFamily& family,
                                          const AlgebraElement& f, double p) {
  if (!(p >= 2.0)) {
    throw Error(ErrorKind::unsupported_range,
                "square functions for p < 2 need the sum decomposition of the row/column space, which is not implemented");
  }
  require_same_group(psi, f);
  const auto n = static_cast<Eigen::Index>(f.size());
  Eigen::MatrixXcd col = Eigen::MatrixXcd::Zero(n, n), row = Eigen::MatrixXcd::Zero(n, n);
  for (int m = family.m_min(); m <= family.m_max(); ++m) {
    const Eigen::MatrixXcd t = to_matrix(dyadic_piece(psi, family, m, f));
    col.noalias() += t.adjoint() * t;
    row.noalias() += t * t.adjoint();
  }
  SquareFunctionNorms out;
  const SqrtNorm c = psd_sqrt_norm(col, p), r = psd_sqrt_norm(row, p);
  out.column = c.norm;
  out.column_min_eig = c.min_eig;
  out.row = r.norm;
  out.row_min_eig = r.min_eig;
  out.rc = std::max(out.column, out.row);
  return out;
}

Reconstruction reconstruction_check(const LengthFunction& psi, const DyadicFamily& family, const AlgebraElement& f,
                                    double p) {
  if (!family.normalized()) throw Error(ErrorKind::invalid_parameter, "reconstruction needs a normalized family");
  Reconstruction out;
  out.lhs = lp_norm(project_j(psi, f), p);
  out.rhs = square_function_norms(psi, family, f, p).rc;
  if (out.rhs > 0.0) out.ratio = out.lhs / out.rhs;
  else if (out.lhs > 0.0) out.ratio = std::numeric_limits<double>::infinity();
  return out;
}

namespace {

double dk(const DyadicFamily& fam, int m, double x, int k) {
  const double h = 1e-4 * x;
  switch (k) {
    case 0: return fam(m, x);
    case 1: return (fam(m, x + h) - fam(m, x - h)) / (2.0 * h);
    case 2: return (fam(m, x + h) - 2.0 * fam(m, x) + fam(m, x - h)) / (h * h);
    default: throw Error(ErrorKind::invalid_parameter, "derivative envelope supports k <= 2");
  }
}

}  // namespace

EnvelopeReport derivative_envelope(const DyadicFamily& family, int k_max, int points) {
  if (k_max < 0 || k_max > 2) throw Error(ErrorKind::invalid_parameter, "derivative envelope supports k <= 2");
  if (points < 2) throw Error(ErrorKind::invalid_parameter, "derivative envelope needs >= 2 points");
  EnvelopeReport rep;
  rep.points = points;
  // Inside the range every x is covered by some member.
  rep.x_min = std::ldexp(1.0, 2 * family.m_min() + 1);
  rep.x_max = std::ldexp(1.0, 2 * family.m_max() - 1);
  if (rep.x_max <= rep.x_min) rep.x_max = 4.0 * rep.x_min;
  rep.constants.assign(k_max + 1, 0.0);
  const double l0 = std::log(rep.x_min), l1 = std::log(rep.x_max);
  for (int i = 0; i < points; ++i) {
    const double x = std::exp(l0 + (l1 - l0) * i / (points - 1));
    for (int k = 0; k <= k_max; ++k) {
      double s = 0.0;
      for (int m = family.m_min(); m <= family.m_max(); ++m) {
        const double d = dk(family, m, x, k);
        s += d * d;
      }
      rep.constants[k] = std::max(rep.constants[k], std::pow(x, 2 * k) * s);
    }
  }
  return rep;
}

}  // namespace cocycle_lab
