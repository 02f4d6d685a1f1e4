#include "cocycle_lab/expr.hpp"

#include "cocycle_lab/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace cocycle_lab {

double smooth_cutoff(double s, double a, double b) {
  if (!(b > a)) throw Error(ErrorKind::invalid_parameter, "cutoff needs a < b");
  if (s <= a) return 1.0;
  if (s >= b) return 0.0;
  const double t = (s - a) / (b - a);
  const double up = std::exp(-1.0 / (1.0 - t));
  const double down = std::exp(-1.0 / t);
  return up / (up + down);
}

struct SymbolExpr::Node {
  enum class Op { number, var, radius, add, sub, mul, div, pow, neg, modulus, call };
  Op op = Op::number;
  cplx value = 0.0;
  int var = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;

  cplx eval(std::span<const double> xi) const;
};

namespace {

using NodePtr = std::shared_ptr<const SymbolExpr::Node>;
using Op = SymbolExpr::Node::Op;

cplx power(cplx base, cplx e) {
  if (base.imag() == 0.0 && e.imag() == 0.0 && base.real() >= 0.0) return std::pow(base.real(), e.real());
  if (base == cplx(0.0)) return e.real() > 0.0 ? cplx(0.0) : cplx(std::nan(""), 0.0);
  return std::pow(base, e);
}

cplx real_only(const std::string& fn, cplx z) {
  if (z.imag() != 0.0) throw Error(ErrorKind::symbol_evaluation, fn + " needs a real argument");
  return z;
}

cplx call(const std::string& fn, const std::vector<cplx>& a) {
  if (fn == "sin") return std::sin(a[0]);
  if (fn == "cos") return std::cos(a[0]);
  if (fn == "exp") return std::exp(a[0]);
  if (fn == "log") return a[0].imag() == 0.0 && a[0].real() > 0.0 ? cplx(std::log(a[0].real())) : std::log(a[0]);
  if (fn == "sqrt") return power(a[0], 0.5);
  if (fn == "abs") return std::abs(a[0]);
  if (fn == "re") return a[0].real();
  if (fn == "im") return a[0].imag();
  if (fn == "conj") return std::conj(a[0]);
  if (fn == "cutoff") {
    return smooth_cutoff(real_only(fn, a[0]).real(), real_only(fn, a[1]).real(), real_only(fn, a[2]).real());
  }
  throw Error(ErrorKind::invalid_parameter, "unknown function " + fn);
}

int arity(const std::string& fn) {
  if (fn == "cutoff") return 3;
  for (const char* f : {"sin", "cos", "exp", "log", "sqrt", "abs", "re", "im", "conj"})
    if (fn == f) return 1;
  return -1;
}

class Parser {
 public:
  Parser(std::string_view s, int dim) : s_(s), dim_(dim) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::invalid_parameter,
                "symbol expression: " + what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Op op, std::vector<NodePtr> args) {
    auto n = std::make_shared<SymbolExpr::Node>();
    n->op = op;
    n->args = std::move(args);
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make(Op::add, {lhs, term()});
      else if (eat('-')) lhs = make(Op::sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = make(Op::mul, {lhs, unary()});
      else if (eat('/')) lhs = make(Op::div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::neg, {unary()});
    if (eat('+')) return unary();
    return pow();
  }

  NodePtr pow() {
    NodePtr base = primary();
    if (eat('^')) return make(Op::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (eat('|')) {
      NodePtr n = expr();
      if (!eat('|')) fail("expected closing '|'");
      return make(Op::modulus, {n});
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::string rest(s_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    auto n = std::make_shared<SymbolExpr::Node>();
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id(s_.substr(start, pos_ - start));
    auto n = std::make_shared<SymbolExpr::Node>();
    if (id == "i") {
      n->value = cplx(0.0, 1.0);
      return n;
    }
    if (id == "pi") {
      n->value = std::numbers::pi;
      return n;
    }
    if (id == "r") {
      n->op = Op::radius;
      return n;
    }
    if (id.size() > 1 && id[0] == 'x' && std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      const int k = std::stoi(id.substr(1));
      if (k < 1 || k > dim_) fail("variable " + id + " outside dimension " + std::to_string(dim_));
      n->op = Op::var;
      n->var = k - 1;
      return n;
    }
    const int want = arity(id);
    if (want < 0) fail("unknown identifier " + id);
    if (!eat('(')) fail("expected '(' after " + id);
    n->op = Op::call;
    n->fn = id;
    std::vector<NodePtr> args;
    args.push_back(expr());
    while (eat(',')) args.push_back(expr());
    if (!eat(')')) fail("expected ')' after arguments of " + id);
    if (static_cast<int>(args.size()) != want) fail(id + " takes " + std::to_string(want) + " argument(s)");
    n->args = std::move(args);
    return n;
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

cplx SymbolExpr::Node::eval(std::span<const double> xi) const {
  switch (op) {
    case Op::number: return value;
    case Op::var: return xi[static_cast<std::size_t>(var)];
    case Op::radius: {
      double s = 0.0;
      for (double x : xi) s += x * x;
      return std::sqrt(s);
    }
    case Op::add: return args[0]->eval(xi) + args[1]->eval(xi);
    case Op::sub: return args[0]->eval(xi) - args[1]->eval(xi);
    case Op::mul: return args[0]->eval(xi) * args[1]->eval(xi);
    case Op::div: return args[0]->eval(xi) / args[1]->eval(xi);
    case Op::pow: return power(args[0]->eval(xi), args[1]->eval(xi));
    case Op::neg: return -args[0]->eval(xi);
    case Op::modulus: return std::abs(args[0]->eval(xi));
    case Op::call: {
      std::vector<cplx> a;
      a.reserve(args.size());
      for (const auto& n : args) a.push_back(n->eval(xi));
      return call(fn, a);
    }
  }
  return 0.0;
}

SymbolExpr SymbolExpr::parse(std::string_view text, int dim) {
  if (dim < 1) throw Error(ErrorKind::invalid_parameter, "symbol dimension must be >= 1");
  Parser p(text, dim);
  return SymbolExpr(std::string(text), dim, p.parse());
}

cplx SymbolExpr::operator()(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dim_) {
    throw Error(ErrorKind::symbol_evaluation, "symbol of dimension " + std::to_string(dim_) + " evaluated at a point of dimension " +
                                                  std::to_string(xi.size()));
  }
  return root_->eval(xi);
}

}  // namespace cocycle_lab
