#pragma once

// Expression language for coefficient functions on a coordinate chart.
//
// Grammar (whitespace-insensitive):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('-'|'+') unary | power
//   power  := atom ('^' integer)?
//   atom   := number | ident | fn '(' expr ')' | '(' expr ')'
//   fn     := sqrt | sin | cos | exp
// so `^` binds tighter than unary minus: -x^2 == -(x^2). Numbers are decimal
// literals read exactly as rationals.
//
// Expressions are immutable DAGs built through simplifying constructors that
// fold constants and apply the 0/1 identities, nothing more.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srcartan/exact_linalg.hpp"

namespace srcartan::sym {

using linalg::Rational;

class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<std::string> names);

  std::size_t dimension() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kNeg, kPow, kSqrt, kSin, kCos, kExp };

class Expr {
 public:
  Expr();  // the constant 0
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
  Expr(long value);             // NOLINT(google-explicit-constructor)

  static Expr variable(std::size_t index);

  Op op() const noexcept;
  const Rational& value() const;  // kConst only
  std::size_t index() const;      // kVar only
  int exponent() const;           // kPow only
  const Expr& lhs() const;        // binary ops, and the operand of unary ops
  const Expr& rhs() const;        // binary ops

  bool is_constant() const noexcept { return op() == Op::kConst; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  /// Structural equality.
  bool operator==(const Expr& other) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, int k);
  friend Expr sqrt(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);

  struct Node;

 private:
  friend struct ExprFactory;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr pow(const Expr& a, int k);
Expr sqrt(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);

/// Named constants substituted at parse time (e.g. metric parameters p, q).
using Bindings = std::map<std::string, Rational, std::less<>>;

/// Parses `src`, resolving identifiers against chart names, then bindings.
/// Throws ParseError with the byte offset of the offending token.
Expr parse(std::string_view src, const Chart& chart, const Bindings& bindings = {});

/// Exact rational read from a decimal literal such as "-1.25" or "3/4".
Rational parse_rational(std::string_view text);

/// Partial derivative with respect to chart variable `var`.
Expr diff(const Expr& e, std::size_t var);

/// Replaces variable i by replacements[i].
Expr substitute(const Expr& e, std::span<const Expr> replacements);

/// Numeric value at `point`. Throws EvaluationError on division by zero,
/// square roots of negatives, or a non-finite result.
double eval(const Expr& e, std::span<const double> point);

/// Text in the grammar above; parse(to_string(e)) == e for folded trees.
std::string to_string(const Expr& e, const Chart& chart);

/// True when the expression mentions variable `var`.
bool depends_on(const Expr& e, std::size_t var);

/// Largest variable index used plus one (0 for constants).
std::size_t variable_bound(const Expr& e);

}  // namespace srcartan::sym
