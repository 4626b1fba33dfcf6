#pragma once

#include "lieorder/errors.hpp"
#include "lieorder/number.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lieorder {

enum class Kind : std::uint8_t {
  Constant,
  Variable,
  Negate,
  Sum,
  Product,
  Quotient,
  IntPower,
  Sin,
  Cos,
  Exp,
};

namespace detail {
struct NodeFactory;
}

/// Immutable symbolic scalar expression. Copies share the underlying node,
/// so an Expr is cheap to pass by value and safe to share across threads.
class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(Number value);
  static Expr variable(std::string name);
  static Expr negate(Expr child);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr quotient(Expr numerator, Expr denominator);
  /// exponent 0 gives the constant 1 and exponent 1 gives `base` itself;
  /// negative exponents are rejected.
  static Expr int_power(Expr base, int exponent);
  static Expr sin(Expr child);
  static Expr cos(Expr child);
  static Expr exp(Expr child);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_constant() const { return is(Kind::Constant); }
  /// True only for the exact or decimal constant zero.
  bool is_zero_constant() const;

  const Number& value() const;
  const std::string& name() const;
  std::span<const Expr> children() const;
  const Expr& child(std::size_t i = 0) const { return children()[i]; }
  int exponent() const;
  std::size_t hash() const;

  /// Number of nodes in the tree.
  std::size_t size() const;

  friend int compare(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
  friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

 private:
  struct Node;
  friend struct detail::NodeFactory;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr from_node(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Tree builders; they do not simplify.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Parses `text` against the grammar
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' integer)?
///   atom  := number | identifier | identifier '(' expr ')' | '(' expr ')'
/// Integer literals become exact rationals, decimal literals become doubles.
Expr parse(std::string_view text, std::span<const std::string> allowed_vars);
Expr parse(std::string_view text, std::initializer_list<std::string> allowed_vars);

/// Minimal-parenthesis rendering; output re-parses to a tree with the same
/// simplified form.
std::string to_text(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Canonical form: expanded sum of monomials with folded rational (or
/// decimal) coefficients. Integer powers of sums are multiplied out;
/// non-constant denominators are kept as reciprocal factors. No
/// trigonometric identities are applied.
/// Throws DivisionByZeroError if a denominator simplifies to zero.
Expr simplify(const Expr& e);

/// Partial derivative with respect to `var`, simplified.
Expr diff(const Expr& e, std::string_view var);

/// Sorted, de-duplicated variable names used by `e`.
std::vector<std::string> variables(const Expr& e);

using Binding = std::map<std::string, double, std::less<>>;

/// Throws MissingBindingError or DivisionByZeroError.
double eval(const Expr& e, const Binding& binding);

/// Expression flattened to a postfix program over an indexed variable list,
/// for repeated evaluation at many points.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// Throws MissingBindingError if `e` uses a name outside `vars`.
  CompiledExpr(const Expr& e, std::span<const std::string> vars);

  /// `values[i]` binds `vars[i]`. Throws DivisionByZeroError.
  double operator()(std::span<const double> values) const;

 private:
  struct Instr {
    Kind op;
    std::uint32_t arg;  // variable index, constant index, or child count
  };
  std::vector<Instr> program_;
  std::vector<double> constants_;
  std::vector<Expr> divisors_;  // for diagnostics, indexed by Quotient arg
};

}  // namespace lieorder
