#pragma once

#include "cocycle_lab/linalg.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace cocycle_lab {

// exp(-1/x) glued smooth step: 1 for s <= a, 0 for s >= b, C-infinity in between.
double smooth_cutoff(double s, double a, double b);

// Small expression language for symbols on R^n.
//
//   variables   x1 .. xn, r = |xi|
//   constants   i, pi, numbers
//   operators   + - * / ^, |expr| for the modulus
//   functions   sin cos exp log sqrt abs re im conj cutoff(s, a, b)
//
// Evaluation is complex throughout. Real nonnegative bases with real
// exponents use the real power, so |xi|^0.5 stays real.
class SymbolExpr {
 public:
  struct Node;

  static SymbolExpr parse(std::string_view text, int dim);

  cplx operator()(std::span<const double> xi) const;
  const std::string& text() const { return text_; }
  int dim() const { return dim_; }

 private:
  SymbolExpr(std::string text, int dim, std::shared_ptr<const Node> root)
      : text_(std::move(text)), dim_(dim), root_(std::move(root)) {}

  std::string text_;
  int dim_ = 0;
  std::shared_ptr<const Node> root_;
};

}  // namespace cocycle_lab
