#pragma once

// Closed-form scalar expressions used for fields, gauge functions and paths.
//
// Grammar (infix, whitespace-insensitive):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Names are either variables from the caller's variable list or the
// constants `pi` and `e`. Functions: sin cos tan exp log sqrt sinh cosh tanh.

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scaleon {

class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

  Expr();

  static Expr constant(double value);
  static Expr variable(std::size_t slot, std::string name);
  static Expr apply(Op function, Expr argument);

  double evaluate(std::span<const double> variables) const;

  /// Symbolic partial derivative with respect to variable `slot`.
  Expr derivative(std::size_t slot) const;

  Op op() const noexcept;
  std::optional<double> constant_value() const noexcept;
  bool is_zero() const noexcept;
  /// Highest variable slot referenced plus one (0 for constants).
  std::size_t arity() const noexcept;
  std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  static Expr binary(Op op, const Expr& a, const Expr& b);
  void collect_arity(std::size_t& arity) const noexcept;
  void print(std::ostream& out) const;
  std::shared_ptr<const Node> node_;
};

/// Parses `text` with the given variable names mapped to slots 0, 1, ...
/// Throws Error(ParseError) with the offending position.
Expr parse_expression(std::string_view text, std::span<const std::string> variables);

/// Variables x0..x3 (space-time coordinates).
Expr parse_field_expression(std::string_view text);

const std::vector<std::string>& coordinate_names();

}  // namespace scaleon
