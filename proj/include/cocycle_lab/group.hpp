#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cocycle_lab {

using Index = std::size_t;

inline constexpr Index kDefaultOrderCap = 5040;
inline constexpr Index kDefaultWordCap = 20000;

// Cayley-table presentation of a finite group. The identity is always index 0.
// Instances are immutable once constructed and always satisfy the group axioms
// (Latin square, associativity, inverses).
class FiniteGroup {
 public:
  // Validates the table (throws Error{validation}) and derives the inverse table.
  static FiniteGroup from_table(Index order, std::vector<std::uint32_t> mul,
                                std::vector<std::string> labels = {}, std::string name = {});

  Index order() const { return order_; }
  Index mul(Index a, Index b) const { return mul_[a * order_ + b]; }
  Index inv(Index g) const { return inv_[g]; }
  static constexpr Index identity() { return 0; }

  const std::vector<std::uint32_t>& table() const { return mul_; }
  const std::vector<Index>& inverses() const { return inv_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(Index g) const;
  const std::string& name() const { return name_; }

  bool is_abelian() const;
  // Structural equality of the multiplication tables.
  bool same_table(const FiniteGroup& other) const;

 private:
  FiniteGroup() = default;

  Index order_ = 0;
  std::vector<std::uint32_t> mul_;
  std::vector<Index> inv_;
  std::vector<std::string> labels_;
  std::string name_;
};

// Throws Error{validation} naming the first violated axiom. Associativity is
// exhaustive for order <= 64 and sampled (1e5 triples, fixed seed) above.
void validate_group_table(Index order, std::span<const std::uint32_t> mul);

FiniteGroup build_cyclic(Index n);
FiniteGroup build_dihedral(Index n, Index cap = kDefaultOrderCap);   // order 2n, r^k s^j -> k + n j
FiniteGroup build_symmetric(Index n, Index cap = kDefaultOrderCap);  // lexicographic permutations
// (a,b,c)(a',b',c') = (a + a' + b c', b + b', c + c') over Z_n; index a + n b + n^2 c.
FiniteGroup build_heisenberg_mod(Index n, Index cap = kDefaultOrderCap);
// Index of (g, h) is g * |H| + h.
FiniteGroup build_product(const FiniteGroup& g, const FiniteGroup& h, Index cap = kDefaultOrderCap);

enum class GroupKind { cyclic, dihedral, symmetric, product, heisenberg_mod };

// product: params are the cyclic factor orders (Z_{p0} x Z_{p1} x ...).
FiniteGroup build_named(GroupKind kind, std::span<const Index> params, Index cap = kDefaultOrderCap);

// A letter is +-(generator + 1); words are stored reduced.
using Word = std::vector<int>;

Word reduce_word(Word w);

// All reduced words of length <= R in the free group on k generators, with the
// partial multiplication inherited from free reduction.
class WordBall {
 public:
  static WordBall build(int generators, int radius, Index cap = kDefaultWordCap);

  Index size() const { return words_.size(); }
  int generators() const { return generators_; }
  int radius() const { return radius_; }
  const Word& word(Index i) const { return words_[i]; }
  const std::vector<Word>& words() const { return words_; }
  std::optional<Index> find(const Word& w) const;
  std::optional<Index> product(Index a, Index b) const;
  Index inv(Index g) const { return inv_[g]; }
  std::size_t length(Index g) const { return words_[g].size(); }
  // Length of the longest common prefix (the common branch in the Cayley graph).
  std::size_t common_prefix(Index g, Index h) const;
  std::string label(Index g) const;

 private:
  int generators_ = 0;
  int radius_ = 0;
  std::vector<Word> words_;
  std::vector<Index> inv_;
  std::map<Word, Index> lookup_;
};

// Integer points of [-K, K]^n with addition defined while the sum stays inside.
// Index 0 is the origin.
class LatticeBox {
 public:
  static LatticeBox build(int dim, int radius, Index cap = kDefaultWordCap);

  Index size() const { return points_.size(); }
  int dim() const { return dim_; }
  int radius() const { return radius_; }
  const std::vector<int>& point(Index i) const { return points_[i]; }
  std::optional<Index> find(std::span<const int> p) const;
  std::optional<Index> product(Index a, Index b) const;
  Index inv(Index g) const { return inv_[g]; }
  std::string label(Index g) const;

 private:
  int dim_ = 0;
  int radius_ = 0;
  std::vector<std::vector<int>> points_;
  std::vector<Index> inv_;
  std::vector<Index> offset_to_index_;
};

// Shared, immutable handle over the three carriers. The multiplication of word
// balls and lattice boxes is partial.
class GroupCarrier {
 public:
  GroupCarrier() = default;
  explicit GroupCarrier(std::shared_ptr<const FiniteGroup> g) : impl_(std::move(g)) {}
  explicit GroupCarrier(std::shared_ptr<const WordBall> b) : impl_(std::move(b)) {}
  explicit GroupCarrier(std::shared_ptr<const LatticeBox> b) : impl_(std::move(b)) {}

  Index order() const;
  std::optional<Index> product(Index a, Index b) const;
  Index inverse(Index g) const;
  bool complete() const { return finite() != nullptr; }
  std::string label(Index g) const;
  std::string describe() const;

  const std::shared_ptr<const FiniteGroup>& finite_ptr() const;
  const FiniteGroup* finite() const;
  const WordBall* ball() const;
  const LatticeBox* lattice() const;

  bool same_as(const GroupCarrier& other) const;
  bool empty() const { return std::holds_alternative<std::monostate>(impl_); }

 private:
  std::variant<std::monostate, std::shared_ptr<const FiniteGroup>, std::shared_ptr<const WordBall>,
               std::shared_ptr<const LatticeBox>>
      impl_;
};

inline GroupCarrier carrier(FiniteGroup g) {
  return GroupCarrier(std::make_shared<const FiniteGroup>(std::move(g)));
}

}  // namespace cocycle_lab
