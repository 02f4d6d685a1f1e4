#include "cocycle_lab/group.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/random.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace cocycle_lab {

namespace {

constexpr Index kExhaustiveAssociativityLimit = 64;
constexpr std::size_t kAssociativitySamples = 100000;
constexpr std::uint64_t kAssociativitySeed = 0x5eed'a550c1a7ULL;

void require_cap(Index order, Index cap, const char* what) {
  if (order > cap) {
    throw Error(ErrorKind::resource_limit, std::string(what) + " has order " + std::to_string(order) +
                                               " above the cap " + std::to_string(cap));
  }
}

}  // namespace

void validate_group_table(Index n, std::span<const std::uint32_t> mul) {
  if (n == 0) throw Error(ErrorKind::validation, "group order must be positive");
  if (mul.size() != n * n) throw Error(ErrorKind::validation, "multiplication table must be order x order");
  auto at = [&](Index a, Index b) -> Index { return mul[a * n + b]; };

  std::vector<char> seen(n);
  for (Index a = 0; a < n; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (Index b = 0; b < n; ++b) {
      const Index v = at(a, b);
      if (v >= n) throw Error(ErrorKind::validation, "table entry out of range");
      if (seen[v]) throw Error(ErrorKind::validation, "row " + std::to_string(a) + " is not a permutation");
      seen[v] = 1;
    }
  }
  for (Index b = 0; b < n; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (Index a = 0; a < n; ++a) {
      const Index v = at(a, b);
      if (seen[v]) throw Error(ErrorKind::validation, "column " + std::to_string(b) + " is not a permutation");
      seen[v] = 1;
    }
  }
  for (Index g = 0; g < n; ++g) {
    if (at(0, g) != g || at(g, 0) != g) throw Error(ErrorKind::validation, "index 0 is not the identity");
  }

  auto check = [&](Index a, Index b, Index c) {
    if (at(at(a, b), c) != at(a, at(b, c))) {
      throw Error(ErrorKind::validation, "associativity fails at (" + std::to_string(a) + "," +
                                             std::to_string(b) + "," + std::to_string(c) + ")");
    }
  };
  if (n <= kExhaustiveAssociativityLimit) {
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) check(a, b, c);
  } else {
    Rng rng(kAssociativitySeed);
    for (std::size_t s = 0; s < kAssociativitySamples; ++s) check(rng.index(n), rng.index(n), rng.index(n));
  }
}

FiniteGroup FiniteGroup::from_table(Index order, std::vector<std::uint32_t> mul, std::vector<std::string> labels,
                                    std::string name) {
  validate_group_table(order, mul);
  if (!labels.empty() && labels.size() != order) {
    throw Error(ErrorKind::validation, "label count does not match the group order");
  }
  FiniteGroup g;
  g.order_ = order;
  g.mul_ = std::move(mul);
  g.labels_ = std::move(labels);
  g.name_ = std::move(name);
  g.inv_.assign(order, 0);
  for (Index a = 0; a < order; ++a) {
    for (Index b = 0; b < order; ++b) {
      if (g.mul(a, b) == 0) {
        g.inv_[a] = b;
        break;
      }
    }
    if (g.mul(g.inv_[a], a) != 0) throw Error(ErrorKind::validation, "left and right inverses differ");
  }
  return g;
}

std::string FiniteGroup::label(Index g) const {
  if (g < labels_.size()) return labels_[g];
  return std::to_string(g);
}

bool FiniteGroup::is_abelian() const {
  for (Index a = 0; a < order_; ++a)
    for (Index b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool FiniteGroup::same_table(const FiniteGroup& other) const {
  return order_ == other.order_ && mul_ == other.mul_;
}

FiniteGroup build_cyclic(Index n) {
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "cyclic group order must be >= 1");
  std::vector<std::uint32_t> mul(n * n);
  std::vector<std::string> labels(n);
  for (Index a = 0; a < n; ++a) {
    labels[a] = std::to_string(a);
    for (Index b = 0; b < n; ++b) mul[a * n + b] = static_cast<std::uint32_t>((a + b) % n);
  }
  return FiniteGroup::from_table(n, std::move(mul), std::move(labels), "Z" + std::to_string(n));
}

FiniteGroup build_dihedral(Index n, Index cap) {
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "dihedral parameter must be >= 1");
  const Index order = 2 * n;
  require_cap(order, cap, "dihedral group");
  std::vector<std::uint32_t> mul(order * order);
  std::vector<std::string> labels(order);
  for (Index x = 0; x < order; ++x) {
    const Index k1 = x % n, j1 = x / n;
    labels[x] = "r" + std::to_string(k1) + (j1 ? "s" : "");
    for (Index y = 0; y < order; ++y) {
      const Index k2 = y % n, j2 = y / n;
      const Index k = j1 ? (k1 + n - k2) % n : (k1 + k2) % n;
      mul[x * order + y] = static_cast<std::uint32_t>(k + n * (j1 ^ j2));
    }
  }
  return FiniteGroup::from_table(order, std::move(mul), std::move(labels), "D" + std::to_string(n));
}

FiniteGroup build_symmetric(Index n, Index cap) {
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "symmetric group degree must be >= 1");
  Index order = 1;
  for (Index k = 2; k <= n; ++k) {
    order *= k;
    require_cap(order, cap, "symmetric group");
  }
  std::vector<std::vector<int>> perms;
  perms.reserve(order);
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  // Lexicographic rank of a permutation (Lehmer code).
  std::vector<Index> factorial(n + 1, 1);
  for (Index k = 1; k <= n; ++k) factorial[k] = factorial[k - 1] * k;
  auto rank = [&](const std::vector<int>& q) {
    Index r = 0;
    for (Index i = 0; i < n; ++i) {
      Index smaller = 0;
      for (Index j = i + 1; j < n; ++j)
        if (q[j] < q[i]) ++smaller;
      r += smaller * factorial[n - 1 - i];
    }
    return r;
  };

  std::vector<std::uint32_t> mul(order * order);
  std::vector<std::string> labels(order);
  std::vector<int> comp(n);
  for (Index a = 0; a < order; ++a) {
    std::string lab;
    for (int v : perms[a]) lab += std::to_string(v + 1);
    labels[a] = lab;
    for (Index b = 0; b < order; ++b) {
      // (ab)(i) = a(b(i))
      for (Index i = 0; i < n; ++i) comp[i] = perms[a][perms[b][i]];
      mul[a * order + b] = static_cast<std::uint32_t>(rank(comp));
    }
  }
  return FiniteGroup::from_table(order, std::move(mul), std::move(labels), "S" + std::to_string(n));
}

FiniteGroup build_heisenberg_mod(Index n, Index cap) {
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "heisenberg modulus must be >= 1");
  const Index order = n * n * n;
  require_cap(order, cap, "heisenberg group");
  std::vector<std::uint32_t> mul(order * order);
  std::vector<std::string> labels(order);
  auto split = [n](Index x) { return std::array<Index, 3>{x % n, (x / n) % n, x / (n * n)}; };
  for (Index x = 0; x < order; ++x) {
    const auto [a, b, c] = split(x);
    labels[x] = "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
    for (Index y = 0; y < order; ++y) {
      const auto [a2, b2, c2] = split(y);
      const Index na = (a + a2 + b * c2) % n;
      const Index nb = (b + b2) % n;
      const Index nc = (c + c2) % n;
      mul[x * order + y] = static_cast<std::uint32_t>(na + n * nb + n * n * nc);
    }
  }
  return FiniteGroup::from_table(order, std::move(mul), std::move(labels), "Heis" + std::to_string(n));
}

FiniteGroup build_product(const FiniteGroup& g, const FiniteGroup& h, Index cap) {
  const Index ng = g.order(), nh = h.order();
  const Index order = ng * nh;
  require_cap(order, cap, "product group");
  std::vector<std::uint32_t> mul(order * order);
  std::vector<std::string> labels(order);
  for (Index x = 0; x < order; ++x) {
    const Index x1 = x / nh, x2 = x % nh;
    labels[x] = "(" + g.label(x1) + "," + h.label(x2) + ")";
    for (Index y = 0; y < order; ++y) {
      const Index y1 = y / nh, y2 = y % nh;
      mul[x * order + y] = static_cast<std::uint32_t>(g.mul(x1, y1) * nh + h.mul(x2, y2));
    }
  }
  return FiniteGroup::from_table(order, std::move(mul), std::move(labels), g.name() + "x" + h.name());
}

FiniteGroup build_named(GroupKind kind, std::span<const Index> params, Index cap) {
  auto single = [&](const char* what) {
    if (params.size() != 1) throw Error(ErrorKind::invalid_parameter, std::string(what) + " takes one parameter");
    return params[0];
  };
  switch (kind) {
    case GroupKind::cyclic: {
      const Index n = single("cyclic");
      require_cap(n, cap, "cyclic group");
      return build_cyclic(n);
    }
    case GroupKind::dihedral: return build_dihedral(single("dihedral"), cap);
    case GroupKind::symmetric: return build_symmetric(single("symmetric"), cap);
    case GroupKind::heisenberg_mod: return build_heisenberg_mod(single("heisenberg_mod"), cap);
    case GroupKind::product: {
      if (params.empty()) throw Error(ErrorKind::invalid_parameter, "product needs at least one factor");
      Index order = 1;
      for (Index p : params) {
        if (p == 0) throw Error(ErrorKind::invalid_parameter, "cyclic factor order must be >= 1");
        order *= p;
        require_cap(order, cap, "product group");
      }
      FiniteGroup acc = build_cyclic(params[0]);
      for (std::size_t i = 1; i < params.size(); ++i) acc = build_product(acc, build_cyclic(params[i]), cap);
      return acc;
    }
  }
  throw Error(ErrorKind::invalid_parameter, "unknown group kind");
}

// ---------------------------------------------------------------------------
// free group word balls

Word reduce_word(Word w) {
  Word out;
  out.reserve(w.size());
  for (int letter : w) {
    if (!out.empty() && out.back() == -letter) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

WordBall WordBall::build(int generators, int radius, Index cap) {
  if (generators < 1) throw Error(ErrorKind::invalid_parameter, "word ball needs at least one generator");
  if (radius < 0) throw Error(ErrorKind::invalid_parameter, "word ball radius must be >= 0");
  // 1 + sum_{j=1..R} 2k (2k-1)^{j-1}
  Index expected = 1, shell = 2 * static_cast<Index>(generators);
  for (int j = 1; j <= radius; ++j) {
    expected += shell;
    if (expected > cap) {
      throw Error(ErrorKind::resource_limit, "word ball exceeds the cap of " + std::to_string(cap) + " words");
    }
    shell *= 2 * static_cast<Index>(generators) - 1;
  }

  WordBall ball;
  ball.generators_ = generators;
  ball.radius_ = radius;
  ball.words_.reserve(expected);
  ball.words_.push_back({});
  std::vector<int> letters;
  for (int g = 1; g <= generators; ++g) {
    letters.push_back(g);
    letters.push_back(-g);
  }
  std::size_t shell_begin = 0, shell_end = 1;
  for (int len = 1; len <= radius; ++len) {
    for (std::size_t i = shell_begin; i < shell_end; ++i) {
      for (int letter : letters) {
        const Word& base = ball.words_[i];
        if (!base.empty() && base.back() == -letter) continue;
        Word w = base;
        w.push_back(letter);
        ball.words_.push_back(std::move(w));
      }
    }
    shell_begin = shell_end;
    shell_end = ball.words_.size();
  }
  for (Index i = 0; i < ball.words_.size(); ++i) ball.lookup_.emplace(ball.words_[i], i);
  ball.inv_.resize(ball.words_.size());
  for (Index i = 0; i < ball.words_.size(); ++i) {
    Word w(ball.words_[i].rbegin(), ball.words_[i].rend());
    for (int& l : w) l = -l;
    ball.inv_[i] = ball.lookup_.at(w);
  }
  return ball;
}

std::optional<Index> WordBall::find(const Word& w) const {
  auto it = lookup_.find(w);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> WordBall::product(Index a, Index b) const {
  Word w = words_[a];
  w.insert(w.end(), words_[b].begin(), words_[b].end());
  return find(reduce_word(std::move(w)));
}

std::size_t WordBall::common_prefix(Index g, Index h) const {
  const Word& a = words_[g];
  const Word& b = words_[h];
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  return k;
}

std::string WordBall::label(Index g) const {
  if (words_[g].empty()) return "e";
  std::string out;
  for (int l : words_[g]) {
    out += "a" + std::to_string(std::abs(l));
    if (l < 0) out += "'";
  }
  return out;
}

// ---------------------------------------------------------------------------
// lattice boxes

LatticeBox LatticeBox::build(int dim, int radius, Index cap) {
  if (dim < 1) throw Error(ErrorKind::invalid_parameter, "lattice dimension must be >= 1");
  if (radius < 0) throw Error(ErrorKind::invalid_parameter, "lattice radius must be >= 0");
  const Index side = 2 * static_cast<Index>(radius) + 1;
  Index total = 1;
  for (int i = 0; i < dim; ++i) {
    total *= side;
    if (total > cap) throw Error(ErrorKind::resource_limit, "lattice box exceeds the cap");
  }
  LatticeBox box;
  box.dim_ = dim;
  box.radius_ = radius;
  box.offset_to_index_.assign(total, 0);
  auto decode = [&](Index offset) {
    std::vector<int> p(dim);
    for (int i = dim - 1; i >= 0; --i) {
      p[i] = static_cast<int>(offset % side) - radius;
      offset /= side;
    }
    return p;
  };
  Index origin_offset = 0;
  for (int i = 0; i < dim; ++i) origin_offset = origin_offset * side + static_cast<Index>(radius);
  box.points_.push_back(decode(origin_offset));
  box.offset_to_index_[origin_offset] = 0;
  for (Index off = 0; off < total; ++off) {
    if (off == origin_offset) continue;
    box.offset_to_index_[off] = box.points_.size();
    box.points_.push_back(decode(off));
  }
  box.inv_.resize(total);
  for (Index i = 0; i < total; ++i) {
    std::vector<int> q = box.points_[i];
    for (int& v : q) v = -v;
    box.inv_[i] = *box.find(q);
  }
  return box;
}

std::optional<Index> LatticeBox::find(std::span<const int> p) const {
  if (static_cast<int>(p.size()) != dim_) return std::nullopt;
  const Index side = 2 * static_cast<Index>(radius_) + 1;
  Index off = 0;
  for (int v : p) {
    if (v < -radius_ || v > radius_) return std::nullopt;
    off = off * side + static_cast<Index>(v + radius_);
  }
  return offset_to_index_[off];
}

std::optional<Index> LatticeBox::product(Index a, Index b) const {
  std::vector<int> s(dim_);
  for (int i = 0; i < dim_; ++i) s[i] = points_[a][i] + points_[b][i];
  return find(s);
}

std::string LatticeBox::label(Index g) const {
  std::string out = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) out += ",";
    out += std::to_string(points_[g][i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// carrier handle

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void empty_carrier() { throw Error(ErrorKind::validation, "empty group carrier"); }
}  // namespace

Index GroupCarrier::order() const {
  return std::visit(overloaded{[](std::monostate) -> Index { empty_carrier(); },
                               [](const std::shared_ptr<const FiniteGroup>& g) { return g->order(); },
                               [](const auto& b) { return b->size(); }},
                    impl_);
}

std::optional<Index> GroupCarrier::product(Index a, Index b) const {
  return std::visit(overloaded{[](std::monostate) -> std::optional<Index> { empty_carrier(); },
                               [&](const std::shared_ptr<const FiniteGroup>& g) -> std::optional<Index> {
                                 return g->mul(a, b);
                               },
                               [&](const auto& c) { return c->product(a, b); }},
                    impl_);
}

Index GroupCarrier::inverse(Index g) const {
  return std::visit(overloaded{[](std::monostate) -> Index { empty_carrier(); },
                               [&](const auto& c) { return c->inv(g); }},
                    impl_);
}

std::string GroupCarrier::label(Index g) const {
  return std::visit(overloaded{[](std::monostate) -> std::string { empty_carrier(); },
                               [&](const auto& c) { return c->label(g); }},
                    impl_);
}

std::string GroupCarrier::describe() const {
  return std::visit(
      overloaded{[](std::monostate) -> std::string { return "empty"; },
                 [](const std::shared_ptr<const FiniteGroup>& g) {
                   return g->name().empty() ? "group(order " + std::to_string(g->order()) + ")" : g->name();
                 },
                 [](const std::shared_ptr<const WordBall>& b) {
                   return "F" + std::to_string(b->generators()) + "-ball(R=" + std::to_string(b->radius()) + ")";
                 },
                 [](const std::shared_ptr<const LatticeBox>& b) {
                   return "Z" + std::to_string(b->dim()) + "-box(R=" + std::to_string(b->radius()) + ")";
                 }},
      impl_);
}

const std::shared_ptr<const FiniteGroup>& GroupCarrier::finite_ptr() const {
  if (auto* p = std::get_if<std::shared_ptr<const FiniteGroup>>(&impl_)) return *p;
  throw Error(ErrorKind::validation, "operation requires a finite group, got " + describe());
}

const FiniteGroup* GroupCarrier::finite() const {
  auto* p = std::get_if<std::shared_ptr<const FiniteGroup>>(&impl_);
  return p ? p->get() : nullptr;
}

const WordBall* GroupCarrier::ball() const {
  auto* p = std::get_if<std::shared_ptr<const WordBall>>(&impl_);
  return p ? p->get() : nullptr;
}

const LatticeBox* GroupCarrier::lattice() const {
  auto* p = std::get_if<std::shared_ptr<const LatticeBox>>(&impl_);
  return p ? p->get() : nullptr;
}

bool GroupCarrier::same_as(const GroupCarrier& other) const {
  if (const FiniteGroup* a = finite()) {
    const FiniteGroup* b = other.finite();
    return b && (a == b || a->same_table(*b));
  }
  if (const WordBall* a = ball()) {
    const WordBall* b = other.ball();
    return b && (a == b || (a->generators() == b->generators() && a->radius() == b->radius()));
  }
  if (const LatticeBox* a = lattice()) {
    const LatticeBox* b = other.lattice();
    return b && (a == b || (a->dim() == b->dim() && a->radius() == b->radius()));
  }
  return false;
}

}  // namespace cocycle_lab
