#include "cocycle_lab/catalog.hpp"

#include "cocycle_lab/error.hpp"

#include <cmath>
#include <numbers>

namespace cocycle_lab::catalog {

namespace {

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

void finish(Cocycle& c) {
  c.dim = static_cast<Index>(c.b.cols());
  c.gram = c.b * c.b.transpose();
}

}  // namespace

Cocycle zn_roots(Index n) {
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "zn_roots needs n >= 1");
  Cocycle c;
  c.group = carrier(build_cyclic(n));
  c.kind = "zn_roots";
  c.b.resize(n, 2);
  c.alpha.resize(n);
  for (Index k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    c.b(k, 0) = std::cos(angle) - 1.0;
    c.b(k, 1) = std::sin(angle);
    c.alpha[k] = rotation(angle);
  }
  finish(c);
  return c;
}

Eigen::Vector4d helix_vector(double alpha, double beta, double xi) {
  const double a = 2.0 * std::numbers::pi * alpha * xi;
  const double b = 2.0 * std::numbers::pi * beta * xi;
  return {std::cos(a) - 1.0, std::sin(a), std::cos(b) - 1.0, std::sin(b)};
}

Cocycle helix(double alpha, double beta, double step, int radius) {
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_parameter, "helix sample step must be > 0");
  auto box = std::make_shared<const LatticeBox>(LatticeBox::build(1, radius));
  Cocycle c;
  c.group = GroupCarrier(box);
  c.kind = "helix";
  c.partial = true;
  const Index n = box->size();
  c.b.resize(n, 4);
  c.alpha.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double xi = step * box->point(i)[0];
    c.b.row(i) = helix_vector(alpha, beta, xi).transpose();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
    a.block<2, 2>(0, 0) = rotation(2.0 * std::numbers::pi * alpha * xi);
    a.block<2, 2>(2, 2) = rotation(2.0 * std::numbers::pi * beta * xi);
    c.alpha[i] = a;
  }
  finish(c);
  return c;
}

Cocycle directional(std::span<const double> gamma, int radius) {
  if (gamma.empty()) throw Error(ErrorKind::invalid_parameter, "directional cocycle needs gamma");
  auto box = std::make_shared<const LatticeBox>(LatticeBox::build(static_cast<int>(gamma.size()), radius));
  Cocycle c;
  c.group = GroupCarrier(box);
  c.kind = "directional";
  c.partial = true;
  const Index n = box->size();
  c.b.resize(n, 1);
  c.alpha.assign(n, Eigen::MatrixXd::Identity(1, 1));
  for (Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < gamma.size(); ++j) s += gamma[j] * box->point(i)[j];
    c.b(i, 0) = s;
  }
  finish(c);
  return c;
}

Eigen::Matrix3d so3_generator(int letter, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  Eigen::Matrix3d a;
  if (std::abs(letter) == 1) {
    a << ct, -st, 0, st, ct, 0, 0, 0, 1;
  } else if (std::abs(letter) == 2) {
    a << 1, 0, 0, 0, ct, -st, 0, st, ct;
  } else {
    throw Error(ErrorKind::invalid_parameter, "free_so3 has two generators");
  }
  return letter > 0 ? a : Eigen::Matrix3d(a.transpose());
}

Cocycle free_so3(double theta, int radius, std::string* warning) {
  if (warning) {
    warning->clear();
    if (std::abs(std::sin(theta)) < 1e-12) *warning = "sin(theta) = 0: the SO(3) image of F_2 is not free";
  }
  auto ball = std::make_shared<const WordBall>(WordBall::build(2, radius));
  Cocycle c;
  c.group = GroupCarrier(ball);
  c.kind = "free_so3";
  c.partial = true;
  const Index n = ball->size();
  c.b.resize(n, 9);
  c.alpha.resize(n);
  for (Index i = 0; i < n; ++i) {
    Eigen::Matrix3d w = Eigen::Matrix3d::Identity();
    for (int letter : ball->word(i)) w = w * so3_generator(letter, theta);
    const Eigen::Matrix3d diff = w - Eigen::Matrix3d::Identity();
    for (int col = 0; col < 3; ++col) c.b.block<1, 3>(i, 3 * col) = diff.col(col).transpose();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(9, 9);
    for (int blk = 0; blk < 3; ++blk) a.block<3, 3>(3 * blk, 3 * blk) = w;
    c.alpha[i] = a;
  }
  finish(c);
  return c;
}

Cocycle haagerup(int generators, int radius) {
  auto ball = std::make_shared<const WordBall>(WordBall::build(generators, radius));
  Cocycle c;
  c.group = GroupCarrier(ball);
  c.kind = "haagerup";
  c.partial = true;
  const Index n = ball->size();
  // Coordinates indexed by the non-empty words; b(g) sums the basis vectors of
  // the non-empty prefixes of g.
  c.b = Eigen::MatrixXd::Zero(n, n > 0 ? n - 1 : 0);
  for (Index i = 1; i < n; ++i) {
    const Word& w = ball->word(i);
    for (std::size_t len = 1; len <= w.size(); ++len) {
      const Index p = *ball->find(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len)));
      c.b(i, p - 1) = 1.0;
    }
  }
  finish(c);
  return c;
}

Cocycle pullback(std::shared_ptr<const FiniteGroup> group, std::span<const Index> hom, const Cocycle& target) {
  const FiniteGroup* h = target.group.finite();
  if (!h) throw Error(ErrorKind::validation, "pullback target must live on a finite group");
  if (hom.size() != group->order()) throw Error(ErrorKind::validation, "homomorphism has the wrong length");
  for (Index x : hom)
    if (x >= h->order()) throw Error(ErrorKind::validation, "homomorphism image out of range");
  for (Index a = 0; a < group->order(); ++a)
    for (Index b = 0; b < group->order(); ++b)
      if (hom[group->mul(a, b)] != h->mul(hom[a], hom[b])) {
        throw Error(ErrorKind::validation, "map is not a homomorphism at (" + group->label(a) + "," +
                                               group->label(b) + ")");
      }
  if (!target.has_action()) throw Error(ErrorKind::validation, "pullback needs the target action");
  Cocycle c;
  c.group = GroupCarrier(group);
  c.side = target.side;
  c.kind = "pullback(" + target.kind + ")";
  c.b.resize(group->order(), target.dim);
  c.alpha.resize(group->order());
  for (Index g = 0; g < group->order(); ++g) {
    c.b.row(g) = target.b.row(hom[g]);
    c.alpha[g] = target.alpha[hom[g]];
  }
  finish(c);
  return c;
}

Cocycle direct_sum(std::shared_ptr<const FiniteGroup> product, const Cocycle& first, const Cocycle& second) {
  const FiniteGroup* g1 = first.group.finite();
  const FiniteGroup* g2 = second.group.finite();
  if (!g1 || !g2) throw Error(ErrorKind::validation, "direct_sum needs cocycles on finite groups");
  const Index n1 = g1->order(), n2 = g2->order();
  if (product->order() != n1 * n2) throw Error(ErrorKind::validation, "product group has the wrong order");
  for (Index x = 0; x < product->order(); ++x)
    for (Index y = 0; y < product->order(); ++y)
      if (product->mul(x, y) != g1->mul(x / n2, y / n2) * n2 + g2->mul(x % n2, y % n2)) {
        throw Error(ErrorKind::validation, "group is not laid out as the product of the factors");
      }
  const Index d1 = first.dim, d2 = second.dim;
  Cocycle c;
  c.group = GroupCarrier(product);
  c.kind = first.kind + "+" + second.kind;
  c.b = Eigen::MatrixXd::Zero(n1 * n2, d1 + d2);
  c.alpha.resize(n1 * n2);
  for (Index x = 0; x < n1 * n2; ++x) {
    c.b.block(x, 0, 1, d1) = first.b.row(x / n2);
    c.b.block(x, d1, 1, d2) = second.b.row(x % n2);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d1 + d2, d1 + d2);
    a.block(0, 0, d1, d1) = first.alpha[x / n2];
    a.block(d1, d1, d2, d2) = second.alpha[x % n2];
    c.alpha[x] = a;
  }
  finish(c);
  return c;
}

std::vector<Index> heisenberg_quotient(Index n) {
  std::vector<Index> hom(n * n * n);
  for (Index x = 0; x < hom.size(); ++x) {
    const Index b = (x / n) % n, c = x / (n * n);
    hom[x] = b * n + c;
  }
  return hom;
}

Cocycle heisenberg_roots(Index n) {
  auto heis = std::make_shared<const FiniteGroup>(build_heisenberg_mod(n));
  auto torus = std::make_shared<const FiniteGroup>(build_product(build_cyclic(n), build_cyclic(n)));
  const Cocycle on_torus = direct_sum(torus, zn_roots(n), zn_roots(n));
  const auto hom = heisenberg_quotient(n);
  Cocycle c = pullback(heis, hom, on_torus);
  c.kind = "heisenberg_roots";
  return c;
}

Cocycle linear_coboundary(std::shared_ptr<const FiniteGroup> group, std::vector<Eigen::MatrixXd> rep,
                          const Eigen::VectorXd& v) {
  const Index n = group->order();
  if (rep.size() != n) throw Error(ErrorKind::validation, "representation has the wrong length");
  const Eigen::Index d = v.size();
  for (Index a = 0; a < n; ++a) {
    if (rep[a].rows() != d || rep[a].cols() != d) throw Error(ErrorKind::validation, "representation has the wrong size");
    if ((rep[a].transpose() * rep[a] - Eigen::MatrixXd::Identity(d, d)).norm() > 1e-9) {
      throw Error(ErrorKind::validation, "representation is not orthogonal at " + group->label(a));
    }
  }
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if ((rep[a] * rep[b] - rep[group->mul(a, b)]).norm() > 1e-9) {
        throw Error(ErrorKind::validation, "not a representation at (" + group->label(a) + "," + group->label(b) + ")");
      }
  Cocycle c;
  c.group = GroupCarrier(group);
  c.kind = "linear_coboundary";
  c.b.resize(n, d);
  for (Index a = 0; a < n; ++a) c.b.row(a) = (rep[a] * v - v).transpose();
  c.alpha = std::move(rep);
  finish(c);
  return c;
}

Cocycle regular_coboundary(std::shared_ptr<const FiniteGroup> group, const Eigen::VectorXd& v) {
  const Index n = group->order();
  if (static_cast<Index>(v.size()) != n) throw Error(ErrorKind::validation, "vector length must equal the group order");
  Cocycle c;
  c.group = GroupCarrier(group);
  c.kind = "regular_coboundary";
  c.b.resize(n, n);
  c.alpha.resize(n);
  for (Index g = 0; g < n; ++g) {
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(n, n);
    for (Index h = 0; h < n; ++h) perm(group->mul(g, h), h) = 1.0;
    c.b.row(g) = (perm * v - v).transpose();
    c.alpha[g] = std::move(perm);
  }
  finish(c);
  return c;
}

std::vector<Eigen::MatrixXd> dihedral_plane_rep(Index n) {
  std::vector<Eigen::MatrixXd> rep(2 * n);
  Eigen::Matrix2d s;
  s << 1, 0, 0, -1;
  for (Index x = 0; x < 2 * n; ++x) {
    const Index k = x % n, j = x / n;
    Eigen::Matrix2d m = rotation(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    if (j) m = m * s;
    rep[x] = m;
  }
  return rep;
}

LengthFunction random_length(std::shared_ptr<const FiniteGroup> group, Rng& rng, int terms, double scale) {
  const Index n = group->order();
  std::vector<double> psi(n, 0.0);
  Eigen::VectorXd v(n), moved(n);
  for (int t = 0; t < terms; ++t) {
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    const double weight = 0.5 + rng.uniform();
    for (Index g = 0; g < n; ++g) {
      for (Index h = 0; h < n; ++h) moved[group->mul(g, h)] = v[h];
      psi[g] += weight * (moved - v).squaredNorm();
    }
  }
  double top = 0.0;
  for (double x : psi) top = std::max(top, x);
  if (top > 0.0)
    for (double& x : psi) x *= scale / top;
  // Exact symmetry; the two evaluations differ only by rounding.
  for (Index g = 0; g < n; ++g) {
    const Index gi = group->inv(g);
    if (gi > g) psi[gi] = psi[g];
  }
  psi[0] = 0.0;
  return LengthFunction(GroupCarrier(group), psi);
}

}  // namespace cocycle_lab::catalog
