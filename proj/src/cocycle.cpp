#include "cocycle_lab/cocycle.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cocycle_lab {

namespace {

constexpr std::uint64_t kRepresentationSeed = 0x7e9'0000'0001ULL;

const FiniteGroup& require_finite(const GroupCarrier& g, const char* op) {
  const FiniteGroup* f = g.finite();
  if (!f) throw Error(ErrorKind::validation, std::string(op) + " requires a complete finite group, got " + g.describe());
  return *f;
}

// Index of g^-1 h (left) or g h^-1 (right), if defined.
std::optional<Index> relative(const GroupCarrier& g, Side side, Index a, Index b) {
  if (side == Side::left) return g.product(g.inverse(a), b);
  return g.product(a, g.inverse(b));
}

}  // namespace

const char* to_string(Side side) { return side == Side::left ? "left" : "right"; }

LengthFunction::LengthFunction(GroupCarrier group, std::vector<double> values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (group_.empty()) throw Error(ErrorKind::validation, "length function without a group");
  if (values_.size() != group_.order()) {
    throw Error(ErrorKind::validation, "length function has " + std::to_string(values_.size()) +
                                           " values for a group of order " + std::to_string(group_.order()));
  }
  double top = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::validation, "length function has a non-finite value");
    top = std::max(top, std::abs(v));
  }
  const double slack = 1e-12 * (1.0 + top);
  if (std::abs(values_[0]) > slack) throw Error(ErrorKind::validation, "psi(e) must vanish");
  values_[0] = 0.0;
  for (Index g = 0; g < values_.size(); ++g) {
    if (values_[g] < -slack) {
      throw Error(ErrorKind::validation, "psi is negative at " + group_.label(g));
    }
    values_[g] = std::max(values_[g], 0.0);
  }
  for (Index g = 0; g < values_.size(); ++g) {
    const Index gi = group_.inverse(g);
    if (std::abs(values_[g] - values_[gi]) > 1e-10 * (1.0 + top)) {
      throw Error(ErrorKind::validation, "psi(g) != psi(g^-1) at " + group_.label(g));
    }
  }
}

double LengthFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

Eigen::MatrixXd gromov_form(const LengthFunction& psi, Side side) {
  const FiniteGroup& g = require_finite(psi.group(), "gromov_form");
  const Index n = g.order();
  Eigen::MatrixXd k(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const Index rel = side == Side::left ? g.mul(g.inv(a), b) : g.mul(a, g.inv(b));
      k(a, b) = 0.5 * (psi[a] + psi[b] - psi[rel]);
    }
  }
  return k;
}

NegativityCertificate is_conditionally_negative(const LengthFunction& psi, double tol) {
  const FiniteGroup& g = require_finite(psi.group(), "is_conditionally_negative");
  const Index n = g.order();
  Eigen::MatrixXd m(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) m(a, b) = psi[g.mul(g.inv(a), b)];
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd pmp = p * m * p;
  const Eigen::VectorXd ev = linalg::symmetric_eigenvalues(pmp);
  const double top = ev.maxCoeff();
  return {top <= tol, -top};
}

std::vector<double> schoenberg_grid() {
  std::vector<double> t;
  for (int k = -6; k <= 6; ++k) t.push_back(std::pow(10.0, 0.5 * k));
  return t;
}

std::vector<SchoenbergVerdict> schoenberg_check(const LengthFunction& psi, std::span<const double> t_list,
                                                double tol) {
  const FiniteGroup& g = require_finite(psi.group(), "schoenberg_check");
  const Index n = g.order();
  std::vector<SchoenbergVerdict> out;
  Eigen::MatrixXd e(n, n);
  for (double t : t_list) {
    if (!(t >= 0.0)) throw Error(ErrorKind::invalid_parameter, "Schoenberg times must be >= 0");
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) e(a, b) = std::exp(-t * psi[g.mul(g.inv(a), b)]);
    const double lo = linalg::symmetric_eigenvalues(e).minCoeff();
    out.push_back({t, lo, lo >= -tol});
  }
  return out;
}

std::vector<double> Cocycle::lengths() const {
  std::vector<double> out(order());
  for (Index g = 0; g < order(); ++g) out[g] = b.row(static_cast<Eigen::Index>(g)).squaredNorm();
  return out;
}

Cocycle build_cocycle(const LengthFunction& psi, Side side, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorKind::invalid_parameter, "tolerance must be >= 0");
  const FiniteGroup& g = require_finite(psi.group(), "build_cocycle");
  const auto cert = is_conditionally_negative(psi, tol * std::max(1.0, psi.max_value()));
  if (!cert.pass) {
    throw Error(ErrorKind::validation,
                "psi is not conditionally negative (min eigenvalue of -PMP = " + std::to_string(cert.min_eig) + ")");
  }
  const Index n = g.order();
  const Eigen::MatrixXd k = gromov_form(psi, side);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double top = ev.size() ? ev.maxCoeff() : 0.0;

  std::vector<Eigen::Index> keep;
  if (top > 0.0) {
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i)
      if (ev[i] > tol * top) keep.push_back(i);
  }
  const Index d = keep.size();

  Cocycle c;
  c.group = psi.group();
  c.side = side;
  c.dim = d;
  c.tol = tol;
  c.gram = k;
  c.b = Eigen::MatrixXd::Zero(n, d);
  Eigen::VectorXd lambda(d);
  for (Index j = 0; j < d; ++j) {
    lambda[j] = ev[keep[j]];
    c.b.col(j) = solver.eigenvectors().col(keep[j]) * std::sqrt(lambda[j]);
  }

  // alpha_g = C_g b Lambda^-1 since b^T b = Lambda.
  const Eigen::MatrixXd lift = c.b * lambda.cwiseInverse().asDiagonal();  // n x d
  const double residual_limit = std::max(tol, 1e-8) * (1.0 + std::sqrt(psi.max_value()));
  c.alpha.resize(n);
  Eigen::MatrixXd target(d, n);
  for (Index a = 0; a < n; ++a) {
    for (Index h = 0; h < n; ++h) {
      if (side == Side::left) {
        target.col(h) = (c.b.row(g.mul(a, h)) - c.b.row(a)).transpose();
      } else {
        const Index ai = g.inv(a);
        target.col(h) = (c.b.row(g.mul(h, ai)) - c.b.row(ai)).transpose();
      }
    }
    c.alpha[a] = target * lift;
    if (d > 0) {
      const double res = (c.alpha[a] * c.b.transpose() - target).cwiseAbs().maxCoeff();
      if (res > residual_limit) {
        throw Error(ErrorKind::degenerate_action, "least-squares residual " + std::to_string(res) +
                                                      " for alpha at " + g.label(a));
      }
    }
  }
  return c;
}

LengthFunction induced_length(const Cocycle& c) { return LengthFunction(c.group, c.lengths()); }

CocycleResiduals cocycle_residuals(const Cocycle& c, const LengthFunction* psi) {
  CocycleResiduals r;
  const GroupCarrier& g = c.group;
  const Index n = c.order();
  const std::vector<double> own = c.lengths();
  auto psi_at = [&](Index x) { return psi ? (*psi)[x] : own[x]; };

  if (c.gram.rows() == static_cast<Eigen::Index>(n)) {
    r.gram = n ? (c.b * c.b.transpose() - c.gram).cwiseAbs().maxCoeff() : 0.0;
  }

  Index defined = 0;
  for (Index a = 0; a < n; ++a) {
    for (Index h = 0; h < n; ++h) {
      if (g.product(a, h)) ++defined;
      const auto rel = relative(g, c.side, a, h);
      if (!rel) continue;
      const double dist = (c.b.row(a) - c.b.row(h)).squaredNorm();
      r.length = std::max(r.length, std::abs(dist - psi_at(*rel)));
    }
  }
  r.coverage = n ? static_cast<double>(defined) / static_cast<double>(n * n) : 1.0;

  if (c.has_action()) {
    const Eigen::MatrixXd bt = c.b.transpose();
    for (Index a = 0; a < n; ++a) {
      const Eigen::MatrixXd& al = c.alpha[a];
      const Eigen::MatrixXd moved = al * bt;  // columns alpha_a b(h)
      for (Index h = 0; h < n; ++h) {
        Eigen::VectorXd expect;
        if (c.side == Side::left) {
          const auto ah = g.product(a, h);
          if (!ah) continue;
          expect = (c.b.row(*ah) - c.b.row(a)).transpose();
        } else {
          const Index ai = g.inverse(a);
          const auto hai = g.product(h, ai);
          if (!hai) continue;
          expect = (c.b.row(*hai) - c.b.row(ai)).transpose();
        }
        r.law = std::max(r.law, (moved.col(h) - expect).norm());
      }
      if (c.dim > 0) {
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(c.dim, c.dim);
        r.orthogonality = std::max(r.orthogonality, (al.transpose() * al - eye).norm());
      }
    }
    // alpha is a representation; exhaustive when cheap, sampled otherwise.
    const double cost = static_cast<double>(n) * n * std::pow(static_cast<double>(c.dim), 3);
    auto rep_check = [&](Index a, Index h) {
      const auto ah = g.product(a, h);
      if (!ah) return;
      r.representation = std::max(r.representation, (c.alpha[a] * c.alpha[h] - c.alpha[*ah]).norm());
    };
    if (cost <= 2e8) {
      for (Index a = 0; a < n; ++a)
        for (Index h = 0; h < n; ++h) rep_check(a, h);
    } else {
      Rng rng(kRepresentationSeed);
      for (int s = 0; s < 400; ++s) rep_check(rng.index(n), rng.index(n));
    }
  } else {
    // Gram-level: <b(gh)-b(g), b(gk)-b(g)> = <b(h), b(k)> where defined (left).
    auto triple = [&](Index a, Index h, Index k) {
      const auto ah = g.product(a, h);
      const auto ak = g.product(a, k);
      if (!ah || !ak) return;
      const double lhs = (c.b.row(*ah) - c.b.row(a)).dot(c.b.row(*ak) - c.b.row(a));
      r.law = std::max(r.law, std::abs(lhs - c.b.row(h).dot(c.b.row(k))));
    };
    if (n <= 200) {
      for (Index a = 0; a < n; ++a)
        for (Index h = 0; h < n; ++h)
          for (Index k = 0; k < n; ++k) triple(a, h, k);
    } else {
      Rng rng(kRepresentationSeed);
      for (int s = 0; s < 20000; ++s) triple(rng.index(n), rng.index(n), rng.index(n));
    }
  }
  return r;
}

double left_right_isometry_residual(const Cocycle& left, const Cocycle& right) {
  if (!left.group.same_as(right.group) || left.order() != right.order()) {
    throw Error(ErrorKind::validation, "left and right cocycles live on different groups");
  }
  if (left.side != Side::left || right.side != Side::right) {
    throw Error(ErrorKind::validation, "expected a (left, right) cocycle pair");
  }
  const GroupCarrier& g = left.group;
  const Index n = left.order();
  const Eigen::MatrixXd k1 = left.b * left.b.transpose();
  const Eigen::MatrixXd k2 = right.b * right.b.transpose();
  double worst = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index h = 0; h < n; ++h)
      worst = std::max(worst, std::abs(k1(a, h) - k2(g.inverse(a), g.inverse(h))));
  return worst;
}

namespace {

double separation_threshold(const Cocycle& c) {
  const auto len = c.lengths();
  const double top = len.empty() ? 0.0 : *std::max_element(len.begin(), len.end());
  return 1e-9 * (1.0 + top);
}

}  // namespace

SeparationReport separation_report(const Cocycle& c) {
  SeparationReport rep;
  const double thr = separation_threshold(c);
  const auto len = c.lengths();
  const Index n = c.order();
  bool any = false;
  double delta = 0.0;
  for (Index g = 0; g < n; ++g) {
    if (len[g] > thr) {
      delta = any ? std::min(delta, len[g]) : len[g];
      any = true;
    }
  }
  rep.delta = any ? delta : 0.0;
  rep.injective = true;
  for (Index a = 0; a < n && rep.injective; ++a)
    for (Index h = a + 1; h < n; ++h)
      if ((c.b.row(a) - c.b.row(h)).squaredNorm() <= thr) {
        rep.injective = false;
        break;
      }
  rep.well_separated = rep.delta > 0.0;
  rep.standard = rep.injective && rep.well_separated;
  return rep;
}

std::vector<BallCount> ball_count_check(const Cocycle& c, std::span<const double> radii) {
  const SeparationReport sep = separation_report(c);
  if (!(sep.delta > 0.0)) throw Error(ErrorKind::not_applicable, "counting bound needs Delta_psi > 0");
  const double thr = separation_threshold(c);
  const Index n = c.order();
  std::vector<BallCount> out;
  for (double r : radii) {
    if (!(r >= 0.0)) throw Error(ErrorKind::invalid_parameter, "radius must be >= 0");
    std::vector<Index> reps;
    for (Index g = 0; g < n; ++g) {
      if (c.b.row(g).norm() > r * (1.0 + 1e-12) + 1e-12) continue;
      bool fresh = true;
      for (Index h : reps)
        if ((c.b.row(g) - c.b.row(h)).squaredNorm() <= thr) {
          fresh = false;
          break;
        }
      if (fresh) reps.push_back(g);
    }
    BallCount bc;
    bc.radius = r;
    bc.count = reps.size();
    bc.bound = std::pow(1.0 + 2.0 * r / sep.delta, static_cast<double>(c.dim));
    bc.pass = static_cast<double>(bc.count) <= bc.bound;
    out.push_back(bc);
  }
  return out;
}

bool is_additive(const Cocycle& c, double tol) {
  const Index n = c.order();
  for (Index a = 0; a < n; ++a)
    for (Index h = 0; h < n; ++h) {
      const auto ah = c.group.product(a, h);
      if (!ah) continue;
      if ((c.b.row(*ah) - c.b.row(a) - c.b.row(h)).norm() > tol) return false;
    }
  return true;
}

Index distinct_actions(const Cocycle& c, double tol) {
  std::vector<const Eigen::MatrixXd*> reps;
  for (const auto& a : c.alpha) {
    bool fresh = true;
    for (const auto* r : reps)
      if ((a - *r).norm() <= tol) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(&a);
  }
  return reps.size();
}

}  // namespace cocycle_lab
