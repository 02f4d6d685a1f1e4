#include "cocycle_lab/multiplier.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cocycle_lab {

const char* to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::lifted: return "lifted";
    case SymbolKind::radial: return "radial";
    case SymbolKind::riesz: return "riesz";
    case SymbolKind::imaginary_power: return "imaginary_power";
    case SymbolKind::explicit_values: return "explicit";
  }
  return "explicit";
}

MultiplierSymbol explicit_symbol(GroupCarrier group, Eigen::VectorXcd values) {
  if (static_cast<Index>(values.size()) != group.order()) {
    throw Error(ErrorKind::validation, "symbol length differs from the group order");
  }
  MultiplierSymbol m;
  m.group = std::move(group);
  m.m = std::move(values);
  m.kind = SymbolKind::explicit_values;
  return m;
}

AlgebraElement apply(const MultiplierSymbol& m, const AlgebraElement& f) {
  const FiniteGroup* g = m.group.finite();
  if (!g || !(g == &f.group() || g->same_table(f.group()))) {
    throw Error(ErrorKind::validation, "symbol and element live on different groups");
  }
  AlgebraElement out = f;
  out.coeffs() = m.m.cwiseProduct(f.coeffs());
  return out;
}

MultiplierSymbol riesz_symbol(const Cocycle& c, const Eigen::VectorXd& eta) {
  if (static_cast<Index>(eta.size()) != c.dim) {
    throw Error(ErrorKind::invalid_parameter, "eta has dimension " + std::to_string(eta.size()) + ", cocycle has " +
                                                  std::to_string(c.dim));
  }
  const LengthFunction psi(c.group, c.lengths());
  MultiplierSymbol m;
  m.group = c.group;
  m.kind = SymbolKind::riesz;
  m.m = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(c.order()));
  for (Index g = 0; g < c.order(); ++g) {
    if (psi.vanishes_at(g)) continue;
    const double proj = c.b.row(static_cast<Eigen::Index>(g)).dot(eta);
    m.m[static_cast<Eigen::Index>(g)] = cplx(0.0, -proj / std::sqrt(psi[g]));
  }
  for (Eigen::Index j = 0; j < eta.size(); ++j) m.params["eta" + std::to_string(j + 1)] = eta[j];
  m.description = "riesz";
  return m;
}

namespace {

void check_value(cplx v, const GroupCarrier& group, Index g) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw Error(ErrorKind::symbol_evaluation, "symbol is not finite at " + group.label(g));
  }
}

}  // namespace

MultiplierSymbol radial_symbol(const LengthFunction& psi, const RadialProfile& h, std::string description) {
  MultiplierSymbol m;
  m.group = psi.group();
  m.kind = SymbolKind::radial;
  m.description = std::move(description);
  m.m.resize(static_cast<Eigen::Index>(psi.size()));
  for (Index g = 0; g < psi.size(); ++g) {
    cplx v;
    try {
      v = h(psi[g]);
    } catch (const Error& e) {
      throw Error(ErrorKind::symbol_evaluation, "symbol evaluation failed at " + psi.group().label(g) + ": " + e.what());
    }
    check_value(v, psi.group(), g);
    m.m[static_cast<Eigen::Index>(g)] = v;
  }
  return m;
}

MultiplierSymbol imaginary_power_symbol(const LengthFunction& psi, double s) {
  MultiplierSymbol m;
  m.group = psi.group();
  m.kind = SymbolKind::imaginary_power;
  m.params["s"] = s;
  m.description = "psi^(is)";
  m.m = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(psi.size()));
  for (Index g = 0; g < psi.size(); ++g) {
    if (psi.vanishes_at(g)) continue;
    m.m[static_cast<Eigen::Index>(g)] = std::polar(1.0, s * std::log(psi[g]));
  }
  return m;
}

MultiplierSymbol lifted_symbol(const Cocycle& c, const LiftedProfile& profile, std::string description) {
  MultiplierSymbol m;
  m.group = c.group;
  m.kind = SymbolKind::lifted;
  m.description = std::move(description);
  m.m.resize(static_cast<Eigen::Index>(c.order()));
  std::vector<double> xi(c.dim);
  for (Index g = 0; g < c.order(); ++g) {
    for (Index j = 0; j < c.dim; ++j) xi[j] = c.b(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(j));
    cplx v;
    try {
      v = profile(xi);
    } catch (const Error& e) {
      throw Error(ErrorKind::symbol_evaluation, "symbol evaluation failed at " + c.group.label(g) + ": " + e.what());
    }
    check_value(v, c.group, g);
    m.m[static_cast<Eigen::Index>(g)] = v;
  }
  return m;
}

double l2_norm_exact(const MultiplierSymbol& m) { return m.m.size() == 0 ? 0.0 : m.m.cwiseAbs().maxCoeff(); }

LpSearchResult lp_norm_search(const MultiplierSymbol& m, double p, int trials, int steps, std::uint64_t seed) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_parameter, "lp_norm_search needs p >= 1");
  if (trials < 1 || steps < 1) throw Error(ErrorKind::invalid_parameter, "trials and steps must be >= 1");
  const auto& group = m.group.finite_ptr();
  const Index n = group->order();

  auto ratio = [&](const AlgebraElement& f) {
    const double den = lp_norm(f, p);
    return den > 0.0 ? lp_norm(apply(m, f), p) / den : 0.0;
  };

  LpSearchResult res;
  Eigen::Index peak = 0;
  m.m.cwiseAbs().maxCoeff(&peak);
  {
    const AlgebraElement f = AlgebraElement::lambda(group, static_cast<Index>(peak));
    res.lower_bound = ratio(f);
    res.best_start = res.lower_bound;
    res.witness = f;
  }
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, "lp-search", static_cast<std::uint64_t>(t)));
    AlgebraElement f = AlgebraElement::random(group, rng);
    while (f.coeffs().norm() == 0.0) f = AlgebraElement::random(group, rng);
    f.coeffs() /= f.coeffs().norm();
    double best = ratio(f);
    res.best_start = std::max(res.best_start, best);
    double sigma = 1.0 / std::sqrt(static_cast<double>(n));
    for (int s = 0; s < steps; ++s) {
      AlgebraElement cand = f;
      cand.coeffs()[static_cast<Eigen::Index>(rng.index(n))] += sigma * rng.complex_normal();
      const double nrm = cand.coeffs().norm();
      if (nrm == 0.0) continue;
      cand.coeffs() /= nrm;
      const double r = ratio(cand);
      if (r > best) {
        best = r;
        f = std::move(cand);
        sigma = std::min(sigma * 1.5, 2.0);
      } else {
        sigma = std::max(sigma * 0.7, 1e-6);
      }
    }
    res.per_trial.push_back(best);
    if (best > res.lower_bound) {
      res.lower_bound = best;
      res.witness = f;
    }
  }
  return res;
}

double schur_riesz_residual(const Cocycle& c, const Eigen::VectorXd& eta, int samples, std::uint64_t seed) {
  if (c.dim < 1) throw Error(ErrorKind::invalid_parameter, "Schur-Riesz residual needs a cocycle of dimension >= 1");
  if (!c.has_action()) throw Error(ErrorKind::not_applicable, "Schur-Riesz residual needs the action matrices");
  if (static_cast<Index>(eta.size()) != c.dim) throw Error(ErrorKind::invalid_parameter, "eta dimension mismatch");
  Rng rng(derive_seed(seed, "schur-riesz"));
  const auto d = static_cast<Eigen::Index>(c.dim);
  double worst = 0.0;
  for (int s = 0; s < std::max(samples, 64); ++s) {
    Eigen::VectorXd xi(d);
    do {
      for (Eigen::Index j = 0; j < d; ++j) xi[j] = rng.normal();
    } while (xi.norm() == 0.0);
    xi /= xi.norm();
    for (Index g = 0; g < c.order(); ++g) {
      const Eigen::VectorXd moved = c.alpha[g] * xi;
      const double lhs = moved.norm() > 0.0 ? moved.dot(eta) / moved.norm() : 0.0;
      const double rhs = xi.dot(c.alpha[c.group.inverse(g)] * eta);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

bool is_radial(const MultiplierSymbol& m, const LengthFunction& psi, double tol) {
  if (static_cast<Index>(m.m.size()) != psi.size()) throw Error(ErrorKind::validation, "symbol and length sizes differ");
  std::vector<Index> order(psi.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return psi[a] < psi[b]; });
  const double level_tol = 1e-9 * (1.0 + psi.max_value());
  const double value_tol = tol * (1.0 + l2_norm_exact(m));
  std::size_t start = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i == order.size() || psi[order[i]] - psi[order[start]] > level_tol) {
      for (std::size_t j = start + 1; j < i; ++j)
        if (std::abs(m.m[static_cast<Eigen::Index>(order[j])] - m.m[static_cast<Eigen::Index>(order[start])]) > value_tol)
          return false;
      start = i;
    }
  }
  return true;
}

EpsilonFreeConditions epsilon_free_conditions(const Cocycle& c, const MultiplierSymbol* m) {
  EpsilonFreeConditions out;
  if (const FiniteGroup* g = c.group.finite()) {
    out.abelian = g->is_abelian();
    out.finite_action = true;
  }
  if (c.group.lattice()) {
    out.abelian = true;
    out.lattice = true;
  }
  if (c.has_action()) {
    out.distinct_actions = distinct_actions(c);
    // On a truncated carrier only the trivial action is certainly finite.
    if (!c.group.finite()) out.finite_action = out.distinct_actions == 1;
  }
  if (m) {
    out.radial = m->kind == SymbolKind::radial || m->kind == SymbolKind::imaginary_power ||
                 is_radial(*m, LengthFunction(c.group, c.lengths()));
  }
  return out;
}

double mihlin_step(int k, double relative_step) {
  if (k <= 2) return relative_step;
  return std::max(relative_step, std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 2)));
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void multi_indices(int n, int total, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (pos == n - 1) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (int k = total; k >= 0; --k) {
    cur[pos] = k;
    multi_indices(n, total - k, cur, pos + 1, out);
  }
}

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Quasi-random directions: Halton points of [-1, 1]^n projected to the sphere.
std::vector<Eigen::VectorXd> sphere_directions(int n, int count, std::uint64_t offset) {
  std::vector<Eigen::VectorXd> dirs;
  if (n == 1) {
    for (int j = 0; j < count; ++j) dirs.push_back(Eigen::VectorXd::Constant(1, j % 2 == 0 ? 1.0 : -1.0));
    return dirs;
  }
  if (n > static_cast<int>(std::size(kPrimes))) throw Error(ErrorKind::invalid_parameter, "Mihlin check supports n <= 16");
  std::uint64_t i = offset + 1;
  while (static_cast<int>(dirs.size()) < count) {
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v[j] = 2.0 * radical_inverse(i, kPrimes[j]) - 1.0;
    ++i;
    if (v.norm() < 1e-3) continue;
    dirs.push_back(v / v.norm());
  }
  return dirs;
}

// Tensor product of central differences; offsets (beta_j / 2 - i) h.
cplx derivative(const LiftedProfile& f, const Eigen::VectorXd& x, const std::vector<int>& beta, double h) {
  const int n = static_cast<int>(beta.size());
  std::vector<int> idx(n, 0);
  std::vector<double> pt(n);
  cplx acc = 0.0;
  for (;;) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      w *= ((idx[j] % 2) ? -1.0 : 1.0) * binomial(beta[j], idx[j]);
      pt[j] = x[j] + (0.5 * beta[j] - idx[j]) * h;
    }
    acc += w * f(pt);
    int j = 0;
    while (j < n && ++idx[j] > beta[j]) idx[j++] = 0;
    if (j == n) break;
  }
  int total = 0;
  for (int b : beta) total += b;
  return acc / std::pow(h, total);
}

}  // namespace

MihlinReport mihlin_check(const LiftedProfile& profile, int n, const MihlinOptions& opt) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "Mihlin check needs n >= 1");
  const int order = opt.order < 0 ? n / 2 + 1 : opt.order;
  if (order > n + 2) throw Error(ErrorKind::invalid_parameter, "Mihlin order above n + 2 is not supported");
  if (opt.shells < 1 || opt.directions < 16) {
    throw Error(ErrorKind::invalid_parameter, "Mihlin check needs >= 1 shell and >= 16 directions per shell");
  }
  if (!(opt.r_min > 0.0) || !(opt.r_max >= opt.r_min)) throw Error(ErrorKind::invalid_parameter, "bad shell radii");
  if (!(opt.relative_step > 0.0)) throw Error(ErrorKind::invalid_parameter, "finite-difference step must be positive");

  MihlinReport rep;
  rep.n = n;
  rep.order = order;
  rep.eps = opt.eps;
  rep.shells = opt.shells;
  rep.directions = opt.directions;
  rep.r_min = opt.r_min;
  rep.r_max = opt.r_max;
  rep.threshold = opt.threshold;

  std::vector<std::vector<std::vector<int>>> betas(order + 1);
  for (int k = 0; k <= order; ++k) {
    std::vector<int> cur(n, 0);
    multi_indices(n, k, cur, 0, betas[k]);
    MihlinOrderStats st;
    st.order = k;
    st.step = mihlin_step(k, opt.relative_step);
    rep.per_order.push_back(st);
  }

  const double lr0 = std::log10(opt.r_min), lr1 = std::log10(opt.r_max);
  for (int s = 0; s < opt.shells; ++s) {
    const double r = opt.shells == 1 ? opt.r_min : std::pow(10.0, lr0 + (lr1 - lr0) * s / (opt.shells - 1));
    const auto dirs = sphere_directions(n, opt.directions, static_cast<std::uint64_t>(s) * opt.directions);
    for (const auto& u : dirs) {
      const Eigen::VectorXd x = r * u;
      for (int k = 0; k <= order && rep.finite; ++k) {
        MihlinOrderStats& st = rep.per_order[k];
        const double h = st.step * r;
        const double scale = std::pow(r, k);
        const double weight_eps = std::max(std::pow(r, k - opt.eps), std::pow(r, k + opt.eps));
        for (const auto& beta : betas[k]) {
          const cplx d = derivative(profile, x, beta, h);
          const double a = std::abs(d);
          if (!std::isfinite(a)) {
            rep.finite = false;
            rep.bad_point.assign(x.data(), x.data() + n);
            break;
          }
          st.sup = std::max(st.sup, scale * a);
          st.sup_minus = std::max(st.sup_minus, std::pow(r, k - opt.eps) * a);
          st.sup_plus = std::max(st.sup_plus, std::pow(r, k + opt.eps) * a);
          st.sup_eps = std::max(st.sup_eps, weight_eps * a);
        }
      }
      if (!rep.finite) break;
    }
    if (!rep.finite) break;
  }

  rep.pass = rep.finite;
  if (rep.finite && opt.threshold > 0.0) {
    for (const auto& st : rep.per_order) {
      const double v = opt.epsilon_mode ? st.sup_eps : st.sup;
      if (v > opt.threshold) rep.pass = false;
    }
  }
  return rep;
}

}  // namespace cocycle_lab
