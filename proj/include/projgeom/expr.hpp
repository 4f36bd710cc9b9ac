#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "projgeom/jet.hpp"

namespace projgeom {

enum class Func { Sin, Cos, Exp, Ln, Sqrt };

/// Immutable scalar-field expression in chart coordinates x1..xn.
///
/// Nodes are shared; copying an Expr is cheap. Variables are stored 0-based
/// (x1 has index 0). The exponent of `^` is always a numeric constant.
class Expr {
 public:
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

  static Expr number(double v);
  static Expr variable(std::size_t index);
  static Expr call(Func f, Expr arg);
  static Expr pow(Expr base, double exponent);

  Kind kind() const { return node_->kind; }
  double number_value() const { return node_->number; }
  std::size_t variable_index() const { return node_->index; }
  double exponent() const { return node_->number; }
  Func func() const { return node_->func; }
  const Expr& lhs() const { return *node_->lhs; }
  const Expr& rhs() const { return *node_->rhs; }
  /// Operand of Neg, Call and Pow.
  const Expr& operand() const { return *node_->lhs; }

  /// Largest variable index + 1 (0 for constant expressions).
  std::size_t arity() const;

  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);
  friend Expr operator-(Expr a);

  /// Structural equality of the trees.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    Kind kind = Kind::Number;
    double number = 0.0;
    std::size_t index = 0;
    Func func = Func::Sin;
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
  };

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr binary(Kind kind, Expr a, Expr b);

  std::shared_ptr<const Node> node_;
};

/// Parses `text` as an expression over x1..x`dim`. Throws SyntaxError,
/// Error(UnknownVariable) or Error(UnknownFunction).
Expr parse(std::string_view text, std::size_t dim);

/// Fully parenthesised text that parses back to the same tree.
std::string to_string(const Expr& e);

/// Value and partial derivatives up to `order` (0..3) at `point`.
/// Throws Error(DomainError) outside the domain of the expression.
Jet3 eval_jet(const Expr& e, std::span<const double> point, int order);

/// Plain value at `point`.
double eval(const Expr& e, std::span<const double> point);

}  // namespace projgeom
