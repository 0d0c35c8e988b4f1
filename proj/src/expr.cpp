#include "plectic/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace plectic {

namespace detail {

enum class Op { kNumber, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kSin, kCos, kExp };

struct Node {
  Op op = Op::kNumber;
  double number = 0.0;
  int index = 0;     // variable index or integer exponent
  int lhs = -1;
  int rhs = -1;
  int parens = 0;    // enclosing parentheses written in the source
  std::size_t offset = 0;
  std::string text;  // literal text for numbers and exponents
};

struct ExprTree {
  std::vector<Node> nodes;
  int root = -1;
};

namespace {

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  ExprTree run() {
    ExprTree t;
    tree_ = &t;
    skip_ws();
    t.root = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return t;
  }

 private:
  int add(Node n) {
    tree_->nodes.push_back(std::move(n));
    return static_cast<int>(tree_->nodes.size()) - 1;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  int expr() {
    int lhs = term();
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) return lhs;
      const char c = src_[pos_];
      if (c != '+' && c != '-') return lhs;
      Node n;
      n.offset = pos_;
      n.op = c == '+' ? Op::kAdd : Op::kSub;
      ++pos_;
      n.lhs = lhs;
      n.rhs = term();
      lhs = add(std::move(n));
    }
  }

  int term() {
    int lhs = factor();
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) return lhs;
      const char c = src_[pos_];
      if (c != '*' && c != '/') return lhs;
      Node n;
      n.offset = pos_;
      n.op = c == '*' ? Op::kMul : Op::kDiv;
      ++pos_;
      n.lhs = lhs;
      n.rhs = factor();
      lhs = add(std::move(n));
    }
  }

  int factor() {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '-') {
      Node n;
      n.op = Op::kNeg;
      n.offset = pos_;
      ++pos_;
      n.lhs = power();
      return add(std::move(n));
    }
    return power();
  }

  int power() {
    int base = atom();
    if (!peek('^')) return base;
    Node n;
    n.op = Op::kPow;
    n.offset = pos_;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < src_.size() && src_[pos_] == '-') ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("expected integer exponent", digits);
    n.text = std::string(src_.substr(start, pos_ - start));
    n.index = std::atoi(n.text.c_str());
    n.lhs = base;
    return add(std::move(n));
  }

  int atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      const int inner = expr();
      if (!peek(')')) throw ParseError("expected ')' to close '(' at byte " + std::to_string(open), pos_);
      ++pos_;
      ++tree_->nodes[static_cast<std::size_t>(inner)].parens;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  int number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t count = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError("malformed exponent in number", start);
    }
    Node n;
    n.op = Op::kNumber;
    n.offset = start;
    n.text = std::string(src_.substr(start, pos_ - start));
    n.number = std::strtod(n.text.c_str(), nullptr);
    return add(std::move(n));
  }

  int identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!peek('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
      ++pos_;
      Node n;
      n.op = name == "sin" ? Op::kSin : (name == "cos" ? Op::kCos : Op::kExp);
      n.offset = start;
      n.lhs = expr();
      if (!peek(')')) throw ParseError("expected ')' closing " + std::string(name), pos_);
      ++pos_;
      return add(std::move(n));
    }
    bool is_var = name.size() >= 2 && name[0] == 'x';
    for (std::size_t i = 1; is_var && i < name.size(); ++i)
      is_var = std::isdigit(static_cast<unsigned char>(name[i])) != 0;
    if (!is_var) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    const long index = std::strtol(std::string(name.substr(1)).c_str(), nullptr, 10);
    if (index >= dim_)
      throw ParseError("variable " + std::string(name) + " out of range for dimension " + std::to_string(dim_), start);
    Node n;
    n.op = Op::kVar;
    n.offset = start;
    n.index = static_cast<int>(index);
    n.text = std::string(name);
    return add(std::move(n));
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
  ExprTree* tree_ = nullptr;
};

void print_node(const ExprTree& t, int id, std::string& out) {
  const Node& n = t.nodes[static_cast<std::size_t>(id)];
  for (int i = 0; i < n.parens; ++i) out += '(';
  switch (n.op) {
    case Op::kNumber:
    case Op::kVar:
      out += n.text;
      break;
    case Op::kNeg:
      out += '-';
      print_node(t, n.lhs, out);
      break;
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv: {
      static constexpr char kSym[] = {'+', '-', '*', '/'};
      print_node(t, n.lhs, out);
      out += kSym[static_cast<int>(n.op) - static_cast<int>(Op::kAdd)];
      print_node(t, n.rhs, out);
      break;
    }
    case Op::kPow:
      print_node(t, n.lhs, out);
      out += '^';
      out += n.text;
      break;
    case Op::kSin:
    case Op::kCos:
    case Op::kExp:
      out += n.op == Op::kSin ? "sin(" : (n.op == Op::kCos ? "cos(" : "exp(");
      print_node(t, n.lhs, out);
      out += ')';
      break;
  }
  for (int i = 0; i < n.parens; ++i) out += ')';
}

// Shared evaluator for doubles and jets. `Leaf` builds constants and
// variables in the value type.
template <class T, class Leaf>
T eval_node(const ExprTree& t, int id, const Leaf& leaf) {
  const Node& n = t.nodes[static_cast<std::size_t>(id)];
  switch (n.op) {
    case Op::kNumber:
      return leaf.constant(n.number);
    case Op::kVar:
      return leaf.variable(n.index);
    case Op::kNeg:
      return -eval_node<T>(t, n.lhs, leaf);
    case Op::kAdd:
      return eval_node<T>(t, n.lhs, leaf) + eval_node<T>(t, n.rhs, leaf);
    case Op::kSub:
      return eval_node<T>(t, n.lhs, leaf) - eval_node<T>(t, n.rhs, leaf);
    case Op::kMul:
      return eval_node<T>(t, n.lhs, leaf) * eval_node<T>(t, n.rhs, leaf);
    case Op::kDiv: {
      const T num = eval_node<T>(t, n.lhs, leaf);
      const T den = eval_node<T>(t, n.rhs, leaf);
      if (leaf.value_of(den) == 0.0) throw DomainError("division by zero", n.offset);
      return leaf.divide(num, den);
    }
    case Op::kPow: {
      const T base = eval_node<T>(t, n.lhs, leaf);
      if (n.index < 0 && leaf.value_of(base) == 0.0) throw DomainError("zero raised to a negative power", n.offset);
      return leaf.power(base, n.index);
    }
    case Op::kSin:
      return leaf.sin(eval_node<T>(t, n.lhs, leaf));
    case Op::kCos:
      return leaf.cos(eval_node<T>(t, n.lhs, leaf));
    case Op::kExp:
      return leaf.exp(eval_node<T>(t, n.lhs, leaf));
  }
  return leaf.constant(0.0);
}

struct DoubleLeaf {
  std::span<const double> x;
  double constant(double v) const { return v; }
  double variable(int i) const { return x[static_cast<std::size_t>(i)]; }
  static double value_of(double v) { return v; }
  static double divide(double a, double b) { return a / b; }
  static double power(double a, int n) { return std::pow(a, n); }
  static double sin(double a) { return std::sin(a); }
  static double cos(double a) { return std::cos(a); }
  static double exp(double a) { return std::exp(a); }
};

struct JetLeaf {
  std::span<const Jet2> inputs;
  int dim;
  int order;
  Jet2 constant(double v) const { return Jet2::constant(v, dim, order); }
  Jet2 variable(int i) const { return inputs[static_cast<std::size_t>(i)]; }
  static double value_of(const Jet2& v) { return v.value(); }
  static Jet2 divide(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
  static Jet2 power(const Jet2& a, int n) { return plectic::pow(a, n); }
  static Jet2 sin(const Jet2& a) { return plectic::sin(a); }
  static Jet2 cos(const Jet2& a) { return plectic::cos(a); }
  static Jet2 exp(const Jet2& a) { return plectic::exp(a); }
};

std::shared_ptr<const ExprTree> zero_tree() {
  static const auto tree = [] {
    auto t = std::make_shared<ExprTree>();
    Node n;
    n.op = Op::kNumber;
    n.text = "0";
    t->nodes.push_back(n);
    t->root = 0;
    return std::shared_ptr<const ExprTree>(t);
  }();
  return tree;
}

}  // namespace
}  // namespace detail

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SmoothFunction::SmoothFunction() : tree_(detail::zero_tree()), dim_(0) {}

SmoothFunction SmoothFunction::parse(std::string_view source, int dim) {
  if (dim <= 0 || dim > kMaxDim)
    throw std::invalid_argument("chart dimension must be in 1.." + std::to_string(kMaxDim));
  SmoothFunction f;
  f.tree_ = std::make_shared<const detail::ExprTree>(detail::Parser(source, dim).run());
  f.dim_ = dim;
  return f;
}

SmoothFunction SmoothFunction::constant(double value, int dim) {
  if (value == 0.0) {
    SmoothFunction f;
    f.dim_ = dim;
    return f;
  }
  // Negative literals are written as a unary minus applied to a number.
  return parse(format_number(value), dim);
}

std::string SmoothFunction::print() const {
  std::string out;
  detail::print_node(*tree_, tree_->root, out);
  return out;
}

bool SmoothFunction::is_zero() const {
  const auto& n = tree_->nodes[static_cast<std::size_t>(tree_->root)];
  return n.op == detail::Op::kNumber && n.number == 0.0;
}

double SmoothFunction::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < dim_) throw std::invalid_argument("point has fewer coordinates than the chart");
  const double v = detail::eval_node<double>(*tree_, tree_->root, detail::DoubleLeaf{x});
  if (!std::isfinite(v)) throw DomainError("non-finite result", 0);
  return v;
}

Jet2 SmoothFunction::eval_jet2(std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) < dim_) throw std::invalid_argument("point has fewer coordinates than the chart");
  const int d = static_cast<int>(x.size());
  std::array<Jet2, kMaxDim> vars;
  for (int i = 0; i < d; ++i) vars[static_cast<std::size_t>(i)] = Jet2::variable(x[static_cast<std::size_t>(i)], i, d, order);
  return eval(std::span<const Jet2>(vars.data(), static_cast<std::size_t>(d)));
}

Jet2 SmoothFunction::eval(std::span<const Jet2> inputs) const {
  if (static_cast<int>(inputs.size()) < dim_) throw std::invalid_argument("too few input jets for composition");
  const int dim = inputs.empty() ? 0 : inputs[0].dim();
  int order = 2;
  for (const auto& j : inputs) order = std::min(order, j.order());
  const Jet2 r = detail::eval_node<Jet2>(*tree_, tree_->root, detail::JetLeaf{inputs, dim, order});
  if (!std::isfinite(r.value())) throw DomainError("non-finite result", 0);
  return r;
}

}  // namespace plectic
