#include "scaleon/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "scaleon/error.hpp"

namespace scaleon {

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::size_t slot = 0;
  std::string name;
  Expr lhs_expr() const { return Expr(lhs); }
  Expr rhs_expr() const { return Expr(rhs); }
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

constexpr Expr::Op kFunctions[] = {Expr::Op::Sin,  Expr::Op::Cos,  Expr::Op::Tan,
                                   Expr::Op::Exp,  Expr::Op::Log,  Expr::Op::Sqrt,
                                   Expr::Op::Sinh, Expr::Op::Cosh, Expr::Op::Tanh};

bool is_function(Expr::Op op) {
  for (Expr::Op f : kFunctions) {
    if (f == op) return true;
  }
  return false;
}

std::string_view function_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::Sin: return "sin";
    case Expr::Op::Cos: return "cos";
    case Expr::Op::Tan: return "tan";
    case Expr::Op::Exp: return "exp";
    case Expr::Op::Log: return "log";
    case Expr::Op::Sqrt: return "sqrt";
    case Expr::Op::Sinh: return "sinh";
    case Expr::Op::Cosh: return "cosh";
    case Expr::Op::Tanh: return "tanh";
    default: return "?";
  }
}

std::optional<Expr::Op> function_by_name(std::string_view name) {
  for (Expr::Op op : kFunctions) {
    if (function_name(op) == name) return op;
  }
  return std::nullopt;
}

double apply_function(Expr::Op op, double x) {
  switch (op) {
    case Expr::Op::Sin: return std::sin(x);
    case Expr::Op::Cos: return std::cos(x);
    case Expr::Op::Tan: return std::tan(x);
    case Expr::Op::Exp: return std::exp(x);
    case Expr::Op::Log: return std::log(x);
    case Expr::Op::Sqrt: return std::sqrt(x);
    case Expr::Op::Sinh: return std::sinh(x);
    case Expr::Op::Cosh: return std::cosh(x);
    case Expr::Op::Tanh: return std::tanh(x);
    default: return std::nan("");
  }
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::size_t slot, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->slot = slot;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = a.node_;
  n->rhs = b.node_;
  return Expr(std::move(n));
}

Expr Expr::apply(Op function, Expr argument) {
  if (!is_function(function)) fail(ErrorCode::InvalidArgument, "not a unary function");
  if (auto c = argument.constant_value()) return constant(apply_function(function, *c));
  auto n = std::make_shared<Node>();
  n->op = function;
  n->lhs = argument.node_;
  return Expr(std::move(n));
}

Expr::Op Expr::op() const noexcept { return node_->op; }

std::optional<double> Expr::constant_value() const noexcept {
  if (node_->op == Op::Const) return node_->value;
  return std::nullopt;
}

bool Expr::is_zero() const noexcept { return node_->op == Op::Const && node_->value == 0.0; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto ca = a.constant_value();
  auto cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca + *cb);
  return Expr::binary(Expr::Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  auto ca = a.constant_value();
  auto cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca - *cb);
  return Expr::binary(Expr::Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  auto ca = a.constant_value();
  auto cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca * *cb);
  if (ca && *ca == 1.0) return b;
  if (cb && *cb == 1.0) return a;
  return Expr::binary(Expr::Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_zero()) return Expr::constant(0.0);
  auto ca = a.constant_value();
  auto cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca / *cb);
  if (cb && *cb == 1.0) return a;
  return Expr::binary(Expr::Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (auto c = a.constant_value()) return Expr::constant(-*c);
  if (a.op() == Expr::Op::Neg) return Expr(a.node_->lhs);
  return Expr::binary(Expr::Op::Neg, a, Expr::constant(0.0));
}

Expr pow(const Expr& base, const Expr& exponent) {
  auto cb = base.constant_value();
  auto ce = exponent.constant_value();
  if (cb && ce) return Expr::constant(std::pow(*cb, *ce));
  if (ce && *ce == 0.0) return Expr::constant(1.0);
  if (ce && *ce == 1.0) return base;
  return Expr::binary(Expr::Op::Pow, base, exponent);
}

double Expr::evaluate(std::span<const double> variables) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var:
      if (n.slot >= variables.size()) {
        fail(ErrorCode::OutOfDomain, "expression needs variable '" + n.name + "'");
      }
      return variables[n.slot];
    case Op::Add: return n.lhs_expr().evaluate(variables) + n.rhs_expr().evaluate(variables);
    case Op::Sub: return n.lhs_expr().evaluate(variables) - n.rhs_expr().evaluate(variables);
    case Op::Mul: return n.lhs_expr().evaluate(variables) * n.rhs_expr().evaluate(variables);
    case Op::Div: return n.lhs_expr().evaluate(variables) / n.rhs_expr().evaluate(variables);
    case Op::Neg: return -n.lhs_expr().evaluate(variables);
    case Op::Pow: {
      const double base = n.lhs_expr().evaluate(variables);
      const Expr exponent = n.rhs_expr();
      // Integer powers by repeated multiplication keep negative bases legal.
      if (auto c = exponent.constant_value(); c && *c == std::round(*c) && std::abs(*c) <= 64) {
        const int k = static_cast<int>(*c);
        double r = 1.0;
        for (int i = 0; i < std::abs(k); ++i) r *= base;
        return k < 0 ? 1.0 / r : r;
      }
      return std::pow(base, exponent.evaluate(variables));
    }
    default: return apply_function(n.op, n.lhs_expr().evaluate(variables));
  }
}

Expr Expr::derivative(std::size_t slot) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return constant(0.0);
    case Op::Var: return constant(n.slot == slot ? 1.0 : 0.0);
    case Op::Add: return n.lhs_expr().derivative(slot) + n.rhs_expr().derivative(slot);
    case Op::Sub: return n.lhs_expr().derivative(slot) - n.rhs_expr().derivative(slot);
    case Op::Neg: return -n.lhs_expr().derivative(slot);
    case Op::Mul: {
      const Expr a = n.lhs_expr(), b = n.rhs_expr();
      return a.derivative(slot) * b + a * b.derivative(slot);
    }
    case Op::Div: {
      const Expr a = n.lhs_expr(), b = n.rhs_expr();
      return (a.derivative(slot) * b - a * b.derivative(slot)) / (b * b);
    }
    case Op::Pow: {
      const Expr a = n.lhs_expr(), b = n.rhs_expr();
      if (auto c = b.constant_value()) {
        return constant(*c) * pow(a, constant(*c - 1.0)) * a.derivative(slot);
      }
      const Expr self(node_);
      return self * (b.derivative(slot) * apply(Op::Log, a) + b * a.derivative(slot) / a);
    }
    default: break;
  }
  const Expr u = n.lhs_expr();
  const Expr du = u.derivative(slot);
  if (du.is_zero()) return constant(0.0);
  Expr outer;
  switch (n.op) {
    case Op::Sin: outer = apply(Op::Cos, u); break;
    case Op::Cos: outer = -apply(Op::Sin, u); break;
    case Op::Tan: {
      const Expr c = apply(Op::Cos, u);
      outer = constant(1.0) / (c * c);
      break;
    }
    case Op::Exp: outer = Expr(node_); break;
    case Op::Log: outer = constant(1.0) / u; break;
    case Op::Sqrt: outer = constant(0.5) / Expr(node_); break;
    case Op::Sinh: outer = apply(Op::Cosh, u); break;
    case Op::Cosh: outer = apply(Op::Sinh, u); break;
    case Op::Tanh: {
      const Expr t(node_);
      outer = constant(1.0) - t * t;
      break;
    }
    default: fail(ErrorCode::InvalidArgument, "cannot differentiate node");
  }
  return outer * du;
}

void Expr::collect_arity(std::size_t& arity) const noexcept {
  const Node& n = *node_;
  if (n.op == Op::Var) arity = std::max(arity, n.slot + 1);
  if (n.lhs) n.lhs_expr().collect_arity(arity);
  if (n.rhs) n.rhs_expr().collect_arity(arity);
}

std::size_t Expr::arity() const noexcept {
  std::size_t a = 0;
  collect_arity(a);
  return a;
}

void Expr::print(std::ostream& out) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      out << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
      return;
    }
    case Op::Var: out << n.name; return;
    case Op::Neg: out << "(-"; n.lhs_expr().print(out); out << ')'; return;
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow: {
      const char sym = n.op == Op::Add ? '+' : n.op == Op::Sub ? '-' : n.op == Op::Mul ? '*'
                     : n.op == Op::Div ? '/' : '^';
      out << '(';
      n.lhs_expr().print(out);
      out << sym;
      n.rhs_expr().print(out);
      out << ')';
      return;
    }
    default:
      out << function_name(n.op) << '(';
      n.lhs_expr().print(out);
      out << ')';
  }
}

std::string Expr::to_string() const {
  std::ostringstream out;
  print(out);
  return out.str();
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> variables)
      : text_(text), variables_(variables) {}

  Expr parse() {
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "in \"" + std::string(text_) + "\" at column " +
                                    std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = e + term();
      else if (accept('-')) e = e - term();
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      if (!accept(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    error("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc()) error("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return Expr::constant(value);
  }

  Expr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);
    if (accept('(')) {
      auto f = function_by_name(id);
      if (!f) {
        pos_ = start;
        error("unknown function '" + std::string(id) + "'");
      }
      Expr arg = expression();
      if (!accept(')')) error("expected ')' after function argument");
      return Expr::apply(*f, arg);
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (variables_[i] == id) return Expr::variable(i, std::string(id));
    }
    if (id == "pi") return Expr::constant(std::numbers::pi);
    if (id == "e") return Expr::constant(std::numbers::e);
    pos_ = start;
    error("unknown name '" + std::string(id) + "'");
  }

  std::string_view text_;
  std::span<const std::string> variables_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, std::span<const std::string> variables) {
  return Parser(text, variables).parse();
}

const std::vector<std::string>& coordinate_names() {
  static const std::vector<std::string> names{"x0", "x1", "x2", "x3"};
  return names;
}

Expr parse_field_expression(std::string_view text) {
  return parse_expression(text, coordinate_names());
}

}  // namespace scaleon
