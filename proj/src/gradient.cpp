#include "cocycle_lab/gradient.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/random.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle_lab {

AlgebraElement generator_apply(const LengthFunction& psi, const AlgebraElement& f, double s) {
  require_same_group(psi, f);
  AlgebraElement out = f;
  for (Index g = 0; g < f.size(); ++g) {
    const auto i = static_cast<Eigen::Index>(g);
    if (psi.vanishes_at(g)) {
      if (s < 0.0 && f[g] != cplx(0.0)) {
        throw Error(ErrorKind::domain, "negative power of the generator applied to an element with a coefficient at " +
                                           f.group().label(g) + " where psi vanishes");
      }
      out.coeffs()[i] = s == 0.0 ? f[g] : cplx(0.0);
    } else {
      out.coeffs()[i] *= std::pow(psi[g], s);
    }
  }
  return out;
}

AlgebraElement gamma_generator(const LengthFunction& psi, const AlgebraElement& f1, const AlgebraElement& f2) {
  const AlgebraElement f1s = f1.adjoint();
  AlgebraElement out = generator_apply(psi, f1s, 1.0) * f2 + f1s * generator_apply(psi, f2, 1.0) -
                       generator_apply(psi, f1s * f2, 1.0);
  out *= 0.5;
  return out;
}

AlgebraElement gamma_gram(const Cocycle& c, const AlgebraElement& f1, const AlgebraElement& f2) {
  if (c.side != Side::left) throw Error(ErrorKind::validation, "gamma_gram needs a left cocycle");
  const FiniteGroup* grp = c.group.finite();
  if (!grp || !(grp == &f1.group() || grp->same_table(f1.group())) || !f1.same_group(f2)) {
    throw Error(ErrorKind::validation, "cocycle and elements live on different groups");
  }
  const Eigen::MatrixXd k = c.b * c.b.transpose();
  AlgebraElement out = AlgebraElement::zero(f1.group_ptr());
  const Index n = grp->order();
  for (Index g = 0; g < n; ++g) {
    const cplx a = std::conj(f1[g]);
    if (a == cplx(0.0)) continue;
    const Index gi = grp->inv(g);
    for (Index h = 0; h < n; ++h) {
      out.coeffs()[static_cast<Eigen::Index>(grp->mul(gi, h))] +=
          a * f2[h] * k(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h));
    }
  }
  return out;
}

void require_cocycle_of(const Cocycle& c, const LengthFunction& psi, double tol) {
  if (c.side != Side::left) throw Error(ErrorKind::validation, "expected a left cocycle");
  if (!c.group.same_as(psi.group())) throw Error(ErrorKind::validation, "cocycle and length function live on different groups");
  const auto len = c.lengths();
  for (Index g = 0; g < psi.size(); ++g) {
    if (std::abs(len[g] - psi[g]) > tol * (1.0 + psi.max_value())) {
      throw Error(ErrorKind::validation, "cocycle does not induce this length function (mismatch at " +
                                             psi.group().label(g) + ")");
    }
  }
}

double min_eigenvalue(const AlgebraElement& selfadjoint) {
  return linalg::hermitian_eigenvalues(to_matrix(selfadjoint)).minCoeff();
}

double gamma_sqrt_norm(const AlgebraElement& gamma, double p) {
  const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(to_matrix(gamma));
  return linalg::normalized_schatten(Eigen::VectorXd(ev.cwiseMax(0.0).cwiseSqrt()), p);
}

AlgebraElement random_polynomial(const LengthFunction& psi, Rng& rng) {
  const auto& grp = psi.group().finite_ptr();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    AlgebraElement f = AlgebraElement::random(grp, rng);
    for (Index g = 0; g < f.size(); ++g)
      if (psi.vanishes_at(g)) f.coeffs()[static_cast<Eigen::Index>(g)] = 0.0;
    const double nrm = f.coeffs().norm();
    if (nrm > 0.0) {
      f.coeffs() /= nrm;
      return f;
    }
  }
  throw Error(ErrorKind::not_applicable, "psi vanishes identically, so there is no trigonometric polynomial off G_0");
}

double meyer_ratio_of(const LengthFunction& psi, const AlgebraElement& f, double p) {
  if (!(p >= 2.0)) {
    throw Error(ErrorKind::unsupported_range, "the p < 2 row/column sum norm is not implemented; use p >= 2");
  }
  const double num = lp_norm(generator_apply(psi, f, 0.5), p);
  const AlgebraElement fs = f.adjoint();
  const double den = std::max(gamma_sqrt_norm(gamma_generator(psi, f, f), p), gamma_sqrt_norm(gamma_generator(psi, fs, fs), p));
  if (den == 0.0) {
    if (num == 0.0) return 1.0;
    throw Error(ErrorKind::numerical_inconsistency, "gradient form vanishes on an element with nonzero A^{1/2} f");
  }
  return num / den;
}

MeyerStats meyer_ratio(const LengthFunction& psi, double p, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::invalid_parameter, "meyer_ratio needs >= 1 sample");
  MeyerStats st;
  st.p = p;
  for (int i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, "meyer", static_cast<std::uint64_t>(i)));
    st.ratios.push_back(meyer_ratio_of(psi, random_polynomial(psi, rng), p));
  }
  std::vector<double> sorted = st.ratios;
  std::sort(sorted.begin(), sorted.end());
  st.min = sorted.front();
  st.max = sorted.back();
  const std::size_t n = sorted.size();
  st.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return st;
}

DerivationElement::DerivationElement(std::shared_ptr<const Cocycle> cocycle, Eigen::MatrixXcd w)
    : cocycle_(std::move(cocycle)), w_(std::move(w)) {
  if (!cocycle_) throw Error(ErrorKind::validation, "derivation element without a cocycle");
  if (static_cast<Index>(w_.rows()) != cocycle_->order() || static_cast<Index>(w_.cols()) != cocycle_->dim) {
    throw Error(ErrorKind::validation, "derivation terms have the wrong shape");
  }
}

DerivationElement& DerivationElement::operator+=(const DerivationElement& other) {
  if (cocycle_ != other.cocycle_) throw Error(ErrorKind::validation, "derivation elements over different cocycles");
  w_ += other.w_;
  return *this;
}

DerivationElement& DerivationElement::operator*=(cplx s) {
  w_ *= s;
  return *this;
}

DerivationElement operator+(DerivationElement a, const DerivationElement& b) { return a += b; }
DerivationElement operator*(cplx s, DerivationElement a) { return a *= s; }

namespace {

const FiniteGroup& crossed_group(const Cocycle& c) {
  if (c.side != Side::left) throw Error(ErrorKind::validation, "the gaussian derivation needs a left cocycle");
  if (!c.has_action()) throw Error(ErrorKind::not_applicable, "the gaussian derivation needs the action matrices");
  const FiniteGroup* g = c.group.finite();
  if (!g) throw Error(ErrorKind::not_applicable, "the gaussian derivation needs a finite group");
  return *g;
}

void require_on(const DerivationElement& d, const AlgebraElement& f) {
  const FiniteGroup& g = crossed_group(d.cocycle());
  if (!(&g == &f.group() || g.same_table(f.group()))) {
    throw Error(ErrorKind::validation, "derivation and element live on different groups");
  }
}

}  // namespace

DerivationElement delta(std::shared_ptr<const Cocycle> c, const AlgebraElement& f) {
  const FiniteGroup& g = crossed_group(*c);
  if (!(&g == &f.group() || g.same_table(f.group()))) {
    throw Error(ErrorKind::validation, "cocycle and element live on different groups");
  }
  Eigen::MatrixXcd w = c->b.cast<cplx>();
  for (Index k = 0; k < f.size(); ++k) w.row(static_cast<Eigen::Index>(k)) *= f[k];
  return DerivationElement(std::move(c), std::move(w));
}

DerivationElement right_multiply(const DerivationElement& d, const AlgebraElement& f) {
  require_on(d, f);
  const FiniteGroup& g = f.group();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d.terms().rows(), d.terms().cols());
  for (Index h = 0; h < g.order(); ++h)
    for (Index k = 0; k < g.order(); ++k) {
      if (f[k] == cplx(0.0)) continue;
      w.row(static_cast<Eigen::Index>(g.mul(h, k))) += f[k] * d.terms().row(static_cast<Eigen::Index>(h));
    }
  return DerivationElement(d.cocycle_ptr(), std::move(w));
}

DerivationElement left_multiply(const AlgebraElement& f, const DerivationElement& d) {
  require_on(d, f);
  const FiniteGroup& g = f.group();
  const Cocycle& c = d.cocycle();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d.terms().rows(), d.terms().cols());
  for (Index h = 0; h < g.order(); ++h) {
    if (f[h] == cplx(0.0)) continue;
    const Eigen::MatrixXcd a = c.alpha[h].cast<cplx>();
    for (Index k = 0; k < g.order(); ++k) {
      const Eigen::VectorXcd moved = a * d.terms().row(static_cast<Eigen::Index>(k)).transpose();
      w.row(static_cast<Eigen::Index>(g.mul(h, k))) += f[h] * moved.transpose();
    }
  }
  return DerivationElement(d.cocycle_ptr(), std::move(w));
}

AlgebraElement expect_adjoint_product(const DerivationElement& d1, const DerivationElement& d2) {
  if (d1.cocycle_ptr() != d2.cocycle_ptr()) throw Error(ErrorKind::validation, "derivation elements over different cocycles");
  const Cocycle& c = d1.cocycle();
  const FiniteGroup& g = crossed_group(c);
  AlgebraElement out = AlgebraElement::zero(c.group.finite_ptr());
  // D1^* D2 = sum B(alpha_{g^-1} conj W1_g) B(alpha_{g^-1} W2_h) lambda(g^-1 h)
  for (Index a = 0; a < g.order(); ++a) {
    const Index ai = g.inv(a);
    const Eigen::MatrixXcd act = c.alpha[ai].cast<cplx>();
    const Eigen::VectorXcd left = act * d1.terms().row(static_cast<Eigen::Index>(a)).conjugate().transpose();
    for (Index h = 0; h < g.order(); ++h) {
      const Eigen::VectorXcd right = act * d2.terms().row(static_cast<Eigen::Index>(h)).transpose();
      out.coeffs()[static_cast<Eigen::Index>(g.mul(ai, h))] += (left.transpose() * right).value();
    }
  }
  return out;
}

AlgebraElement expect_gaussian_contraction(const Eigen::VectorXd& eta, const DerivationElement& d) {
  const Cocycle& c = d.cocycle();
  if (static_cast<Index>(eta.size()) != c.dim) throw Error(ErrorKind::invalid_parameter, "eta dimension mismatch");
  AlgebraElement out = AlgebraElement::zero(c.group.finite_ptr());
  out.coeffs() = d.terms() * eta.cast<cplx>();
  return out;
}

MonteCarloEstimate crossed_lp_montecarlo(const DerivationElement& d, double p, int num_z, std::uint64_t seed) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_parameter, "crossed_lp_montecarlo needs p >= 1");
  if (num_z < 100) throw Error(ErrorKind::invalid_parameter, "crossed_lp_montecarlo needs num_z >= 100");
  const Cocycle& c = d.cocycle();
  const FiniteGroup& g = crossed_group(c);
  const auto n = static_cast<Eigen::Index>(g.order());
  const auto dim = static_cast<Eigen::Index>(c.dim);

  MonteCarloEstimate est;
  est.samples = num_z;
  if (d.is_zero()) return est;

  // Row g * n + h holds alpha_{g^-1} W_{g h^-1}.
  Eigen::MatrixXcd u(n * n, dim);
  for (Index a = 0; a < g.order(); ++a) {
    const Eigen::MatrixXcd act = c.alpha[g.inv(a)].cast<cplx>();
    std::vector<Eigen::VectorXcd> moved(g.order());
    for (Index k = 0; k < g.order(); ++k) moved[k] = act * d.terms().row(static_cast<Eigen::Index>(k)).transpose();
    for (Index h = 0; h < g.order(); ++h) {
      u.row(static_cast<Eigen::Index>(a) * n + static_cast<Eigen::Index>(h)) = moved[g.mul(a, g.inv(h))].transpose();
    }
  }

  constexpr int kBatches = 10;
  std::vector<double> batch_sum(kBatches, 0.0);
  std::vector<int> batch_count(kBatches, 0);
  Eigen::VectorXcd z(dim);
  Eigen::MatrixXcd m(n, n);
  for (int s = 0; s < num_z; ++s) {
    Rng rng(derive_seed(seed, "crossed-mc", static_cast<std::uint64_t>(s)));
    for (Eigen::Index j = 0; j < dim; ++j) z[j] = rng.normal();
    const Eigen::VectorXcd flat = u * z;
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index h = 0; h < n; ++h) m(a, h) = flat[a * n + h];
    double val;
    if (p == 2.0) {
      val = m.squaredNorm() / static_cast<double>(n);
    } else {
      const Eigen::VectorXd sv = linalg::singular_values(m);
      val = 0.0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) val += std::pow(sv[i], p);
      val /= static_cast<double>(n);
    }
    const int b = static_cast<int>((static_cast<long long>(s) * kBatches) / num_z);
    batch_sum[b] += val;
    ++batch_count[b];
  }
  std::vector<double> means(kBatches);
  double total = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    means[b] = batch_sum[b] / batch_count[b];
    total += batch_sum[b];
  }
  const double mu = total / num_z;
  double var = 0.0;
  for (double bm : means) var += (bm - mu) * (bm - mu);
  var /= (kBatches - 1);
  const double se_mu = std::sqrt(var / kBatches);
  est.mean_power = mu;
  est.estimate = std::pow(mu, 1.0 / p);
  est.std_error = mu > 0.0 ? est.estimate / (p * mu) * se_mu : 0.0;
  return est;
}

KhintchineBand khintchine_band(const LengthFunction& psi, std::shared_ptr<const Cocycle> c, const AlgebraElement& f,
                               double p, int num_z, std::uint64_t seed) {
  if (!(p >= 2.0)) throw Error(ErrorKind::unsupported_range, "the Khintchine band is only checked for p >= 2");
  require_cocycle_of(*c, psi, 1e-8);
  KhintchineBand out;
  const MonteCarloEstimate mc = crossed_lp_montecarlo(delta(c, f), p, num_z, seed);
  out.mc_norm = mc.estimate;
  out.std_error = mc.std_error;
  const AlgebraElement fs = f.adjoint();
  out.rc_norm = std::max(gamma_sqrt_norm(gamma_gram(*c, f, f), p), gamma_sqrt_norm(gamma_gram(*c, fs, fs), p));
  if (out.rc_norm == 0.0) {
    if (project_j(psi, f).coeffs().norm() > 0.0) {
      throw Error(ErrorKind::numerical_inconsistency, "row/column norm vanishes on an element with support off G_0");
    }
    out.ratio = 1.0;
    out.pass = true;
    return out;
  }
  out.ratio = out.mc_norm / out.rc_norm;
  out.pass = out.mc_norm >= out.rc_norm - 4.0 * out.std_error;
  return out;
}

CovarianceCheck gaussian_covariance_check(const Eigen::VectorXd& v, const Eigen::VectorXd& w, int samples,
                                          std::uint64_t seed) {
  if (v.size() != w.size()) throw Error(ErrorKind::invalid_parameter, "vectors of different dimension");
  if (samples < 2) throw Error(ErrorKind::invalid_parameter, "covariance check needs >= 2 samples");
  Rng rng(derive_seed(seed, "covariance"));
  Eigen::VectorXd z(v.size());
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = rng.normal();
    const double x = z.dot(v) * z.dot(w);
    sum += x;
    sum2 += x * x;
  }
  CovarianceCheck out;
  out.empirical = sum / samples;
  out.exact = v.dot(w);
  const double var = std::max(0.0, (sum2 - samples * out.empirical * out.empirical) / (samples - 1));
  out.std_error = std::sqrt(var / samples);
  out.pass = std::abs(out.empirical - out.exact) <= 4.0 * out.std_error + 1e-15;
  return out;
}

}  // namespace cocycle_lab
