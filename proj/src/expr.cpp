#include "projgeom/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "projgeom/error.hpp"

namespace projgeom {

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = v;
  return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->lhs = std::make_shared<const Expr>(std::move(arg));
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, double exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->number = exponent;
  n->lhs = std::make_shared<const Expr>(std::move(base));
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::make_shared<const Expr>(std::move(a));
  n->rhs = std::make_shared<const Expr>(std::move(b));
  return Expr(std::move(n));
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Expr::Kind::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Expr::Kind::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Expr::Kind::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Expr::Kind::Div, std::move(a), std::move(b)); }

Expr operator-(Expr a) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Neg;
  n->lhs = std::make_shared<const Expr>(std::move(a));
  return Expr(std::move(n));
}

std::size_t Expr::arity() const {
  switch (kind()) {
    case Kind::Number: return 0;
    case Kind::Variable: return variable_index() + 1;
    case Kind::Neg:
    case Kind::Call:
    case Kind::Pow: return operand().arity();
    default: return std::max(lhs().arity(), rhs().arity());
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  using K = Expr::Kind;
  switch (a.kind()) {
    case K::Number: return a.number_value() == b.number_value();
    case K::Variable: return a.variable_index() == b.variable_index();
    case K::Neg: return a.operand() == b.operand();
    case K::Call: return a.func() == b.func() && a.operand() == b.operand();
    case K::Pow: return a.exponent() == b.exponent() && a.operand() == b.operand();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == text_.size()) throw SyntaxError(1, "empty expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_ + 1, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+')) {
        e = std::move(e) + parse_term();
      } else if (accept('-')) {
        e = std::move(e) - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) {
        e = std::move(e) * parse_unary();
      } else if (accept('/')) {
        e = std::move(e) / parse_unary();
      } else {
        return e;
      }
    }
  }

  // '^' binds tighter than unary minus and is right-associative.
  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_ws();
    const std::size_t caret = pos_;
    if (!accept('^')) return base;
    Expr exponent = parse_unary();
    if (exponent.arity() != 0) {
      throw SyntaxError(caret + 1, "exponent must be a numeric constant");
    }
    const double value = eval(exponent, {});
    return Expr::pow(std::move(base), value);
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ == start + 1 && text_[start] == '.') {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name.size() > 1 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      std::size_t index = 0;
      const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (res.ec != std::errc() || index < 1 || index > dim_) {
        throw Error(ErrorKind::UnknownVariable,
                    "'" + std::string(name) + "' at offset " + std::to_string(start + 1) +
                        " (chart dimension " + std::to_string(dim_) + ")");
      }
      return Expr::variable(index - 1);
    }

    static constexpr std::pair<std::string_view, Func> kFuncs[] = {
        {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp},
        {"ln", Func::Ln},   {"sqrt", Func::Sqrt}};
    skip_ws();
    const bool is_call = pos_ < text_.size() && text_[pos_] == '(';
    for (const auto& [fname, f] : kFuncs) {
      if (name == fname) {
        if (!is_call) fail("function '" + std::string(name) + "' requires an argument");
        ++pos_;
        Expr arg = parse_expr();
        if (!accept(')')) fail("expected ')'");
        return Expr::call(f, std::move(arg));
      }
    }
    if (is_call) {
      throw Error(ErrorKind::UnknownFunction,
                  "'" + std::string(name) + "' at offset " + std::to_string(start + 1));
    }
    throw Error(ErrorKind::UnknownVariable,
                "'" + std::string(name) + "' at offset " + std::to_string(start + 1));
  }

  std::string_view text_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0) return "(" + s + ")";
  return s;
}

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

Jet3 apply(Func f, const Jet3& a) {
  switch (f) {
    case Func::Sin: return sin(a);
    case Func::Cos: return cos(a);
    case Func::Exp: return exp(a);
    case Func::Ln: return log(a);
    case Func::Sqrt: return sqrt(a);
  }
  return a;
}

constexpr double kMaxRepeatedPower = 64.0;

Jet3 eval_rec(const Expr& e, std::span<const double> p, int order) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return Jet3::constant(p.size(), order, e.number_value());
    case K::Variable:
      if (e.variable_index() >= p.size()) {
        throw Error(ErrorKind::DimensionMismatch, "point has fewer coordinates than the expression");
      }
      return Jet3::variable(p.size(), order, e.variable_index(), p[e.variable_index()]);
    case K::Add: return eval_rec(e.lhs(), p, order) + eval_rec(e.rhs(), p, order);
    case K::Sub: return eval_rec(e.lhs(), p, order) - eval_rec(e.rhs(), p, order);
    case K::Mul: return eval_rec(e.lhs(), p, order) * eval_rec(e.rhs(), p, order);
    case K::Div: return eval_rec(e.lhs(), p, order) / eval_rec(e.rhs(), p, order);
    case K::Neg: return -eval_rec(e.operand(), p, order);
    case K::Call: return apply(e.func(), eval_rec(e.operand(), p, order));
    case K::Pow: {
      const double q = e.exponent();
      Jet3 base = eval_rec(e.operand(), p, order);
      if (std::trunc(q) == q && std::abs(q) <= kMaxRepeatedPower) {
        return pow_int(base, static_cast<int>(q));
      }
      return pow_real(base, q);
    }
  }
  throw Error(ErrorKind::ContractViolation, "corrupt expression node");
}

}  // namespace

Expr parse(std::string_view text, std::size_t dim) { return Parser(text, dim).parse_all(); }

std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return format_number(e.number_value());
    case K::Variable: return "x" + std::to_string(e.variable_index() + 1);
    case K::Add: return "(" + to_string(e.lhs()) + " + " + to_string(e.rhs()) + ")";
    case K::Sub: return "(" + to_string(e.lhs()) + " - " + to_string(e.rhs()) + ")";
    case K::Mul: return "(" + to_string(e.lhs()) + "*" + to_string(e.rhs()) + ")";
    case K::Div: return "(" + to_string(e.lhs()) + "/" + to_string(e.rhs()) + ")";
    case K::Neg: return "(-" + to_string(e.operand()) + ")";
    case K::Call: return std::string(func_name(e.func())) + "(" + to_string(e.operand()) + ")";
    case K::Pow: return "(" + to_string(e.operand()) + "^" + format_number(e.exponent()) + ")";
  }
  return "?";
}

Jet3 eval_jet(const Expr& e, std::span<const double> point, int order) {
  if (order < 0 || order > Jet3::kMaxOrder) {
    throw Error(ErrorKind::ContractViolation, "derivative order must lie in [0, 3]");
  }
  return eval_rec(e, point, order);
}

double eval(const Expr& e, std::span<const double> point) { return eval_rec(e, point, 0).value(); }

}  // namespace projgeom
