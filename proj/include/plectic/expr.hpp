#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plectic/jet.hpp"

namespace plectic {

/// Malformed expression source; `offset()` is the byte offset of the problem.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the domain (division by zero, 0 to a negative power,
/// non-finite result). `offset()` locates the offending sub-expression.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {
struct ExprTree;
}

/**
 * A smooth function on a d-dimensional chart, given by an expression over
 * x0..x{d-1} built from decimal literals, + - * /, integer powers and
 * sin/cos/exp.
 *
 * Instances are immutable and cheap to copy (the tree is shared).
 */
class SmoothFunction {
 public:
  /// The zero function on a 0-dimensional chart.
  SmoothFunction();

  static SmoothFunction parse(std::string_view source, int dim);
  static SmoothFunction constant(double value, int dim);

  int dim() const { return dim_; }

  /// Canonical text: the source with whitespace removed.
  std::string print() const;

  /// True for a literal 0 (lets operators skip structurally absent terms).
  bool is_zero() const;

  double eval(std::span<const double> x) const;
  Jet2 eval_jet2(std::span<const double> x, int order = 2) const;

  /// Composition: substitutes the given jets for x0..x{d-1}.
  Jet2 eval(std::span<const Jet2> inputs) const;

 private:
  std::shared_ptr<const detail::ExprTree> tree_;
  int dim_ = 0;
};

inline SmoothFunction parse(std::string_view source, int dim) {
  return SmoothFunction::parse(source, dim);
}

inline Jet2 eval_jet2(const SmoothFunction& f, std::span<const double> x) {
  return f.eval_jet2(x);
}

/// Formats a double so that it parses back to the same value.
std::string format_number(double v);

}  // namespace plectic
