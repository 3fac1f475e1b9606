#pragma once

// Reward functions f(x, y): a small catalog plus user expressions.
//
// Expression grammar, by increasing precedence:
//
//     expr    := term (('+' | '-') term)*
//     term    := unary (('*' | '/') unary)*
//     unary   := '-' unary | power
//     power   := primary ('^' unary)?          right associative
//     primary := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
//     func    := exp | tanh | sqrt | abs

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smt/error.hpp"

namespace smt {

class Expression {
 public:
  static Expression parse(std::string_view text) {
    Parser p{text, 0};
    Expression e;
    e.root_ = p.expr();
    p.skip_space();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    e.text_ = std::string(text);
    return e;
  }

  double operator()(double x, double y) const { return root_->eval(x, y); }
  const std::string& text() const { return text_; }

 private:
  struct Node {
    enum class Op { Num, X, Y, Add, Sub, Mul, Div, Pow, Neg, Exp, Tanh, Sqrt, Abs };
    Op op = Op::Num;
    double value = 0.0;
    std::unique_ptr<Node> lhs;
    std::unique_ptr<Node> rhs;

    double eval(double x, double y) const {
      switch (op) {
        case Op::Num:
          return value;
        case Op::X:
          return x;
        case Op::Y:
          return y;
        case Op::Add:
          return lhs->eval(x, y) + rhs->eval(x, y);
        case Op::Sub:
          return lhs->eval(x, y) - rhs->eval(x, y);
        case Op::Mul:
          return lhs->eval(x, y) * rhs->eval(x, y);
        case Op::Div:
          return lhs->eval(x, y) / rhs->eval(x, y);
        case Op::Pow:
          return std::pow(lhs->eval(x, y), rhs->eval(x, y));
        case Op::Neg:
          return -lhs->eval(x, y);
        case Op::Exp:
          return std::exp(lhs->eval(x, y));
        case Op::Tanh:
          return std::tanh(lhs->eval(x, y));
        case Op::Sqrt:
          return std::sqrt(lhs->eval(x, y));
        case Op::Abs:
          return std::fabs(lhs->eval(x, y));
      }
      return 0.0;
    }
  };
  using NodePtr = std::unique_ptr<Node>;

  static NodePtr make(typename Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  struct Parser {
    std::string_view s;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& what) const {
      throw Error(ErrorCode::ParseError, "reward expression: " + what + " at offset " + std::to_string(pos));
    }

    void skip_space() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool accept(char c) {
      skip_space();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    NodePtr expr() {
      NodePtr lhs = term();
      while (true) {
        if (accept('+')) {
          lhs = make(Node::Op::Add, std::move(lhs), term());
        } else if (accept('-')) {
          lhs = make(Node::Op::Sub, std::move(lhs), term());
        } else {
          return lhs;
        }
      }
    }

    NodePtr term() {
      NodePtr lhs = unary();
      while (true) {
        if (accept('*')) {
          lhs = make(Node::Op::Mul, std::move(lhs), unary());
        } else if (accept('/')) {
          lhs = make(Node::Op::Div, std::move(lhs), unary());
        } else {
          return lhs;
        }
      }
    }

    NodePtr unary() {
      if (accept('-')) return make(Node::Op::Neg, unary());
      if (accept('+')) return unary();
      return power();
    }

    NodePtr power() {
      NodePtr base = primary();
      if (accept('^')) return make(Node::Op::Pow, std::move(base), unary());
      return base;
    }

    NodePtr primary() {
      skip_space();
      if (pos >= s.size()) fail("unexpected end of input");
      char c = s[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
      if (accept('(')) {
        NodePtr inner = expr();
        if (!accept(')')) fail("expected ')'");
        return inner;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
        std::string_view name = s.substr(start, pos - start);
        if (name == "x") return make(Node::Op::X);
        if (name == "y") return make(Node::Op::Y);
        typename Node::Op op;
        if (name == "exp") {
          op = Node::Op::Exp;
        } else if (name == "tanh") {
          op = Node::Op::Tanh;
        } else if (name == "sqrt") {
          op = Node::Op::Sqrt;
        } else if (name == "abs") {
          op = Node::Op::Abs;
        } else {
          pos = start;
          fail("unknown name '" + std::string(name) + "'");
        }
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make(op, std::move(arg));
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
      std::string buf(s.substr(pos));
      char* end = nullptr;
      double v = std::strtod(buf.c_str(), &end);
      std::size_t used = static_cast<std::size_t>(end - buf.c_str());
      if (used == 0) fail("bad number");
      pos += used;
      auto n = make(Node::Op::Num);
      n->value = v;
      return n;
    }
  };

  std::shared_ptr<const Node> root_;
  std::string text_;
};

// ---------------------------------------------------------------------------
// Catalog

enum class RewardKind {
  CanonicalSm,             // tanh(x) (sqrt(1+y^2) - y): f_xy < 0, f_xyy > 0
  NegatedCanonical,        // minus the above
  TanhSqrtProduct,         // -tanh(x) (sqrt(1+y^2) + y): f_xy < 0, f_xyy < 0
  ExpProduct,              // a e^x e^y
  ExpProductPlusBilinear,  // a e^x e^y + c x y
  Expr,
};

/// Signs of the cross differences a reward is built to have: +1 when
/// f(x2,.) - f(x1,.) is increasing (first) or convex (second) for x1 < x2,
/// -1 for the reverse, 0 when not known.
struct SmClassification {
  int first = 0;
  int second = 0;

  bool supermartingale() const { return first < 0 && second > 0; }
};

struct RewardSpec {
  RewardKind kind = RewardKind::CanonicalSm;
  double a = 1.0;
  double c = 0.0;
  std::shared_ptr<Expression> expression;

  static RewardSpec canonical() { return {RewardKind::CanonicalSm}; }
  static RewardSpec negated_canonical() { return {RewardKind::NegatedCanonical}; }
  static RewardSpec tanh_sqrt_product() { return {RewardKind::TanhSqrtProduct}; }
  static RewardSpec exp_product(double a = 1.0) { return {RewardKind::ExpProduct, a}; }
  static RewardSpec exp_product_plus_bilinear(double c, double a = 1.0) {
    return {RewardKind::ExpProductPlusBilinear, a, c};
  }
  static RewardSpec expr(std::string_view text) {
    RewardSpec r{RewardKind::Expr};
    r.expression = std::make_shared<Expression>(Expression::parse(text));
    return r;
  }

  double operator()(double x, double y) const {
    switch (kind) {
      case RewardKind::CanonicalSm:
        return std::tanh(x) * (std::sqrt(1 + y * y) - y);
      case RewardKind::NegatedCanonical:
        return -std::tanh(x) * (std::sqrt(1 + y * y) - y);
      case RewardKind::TanhSqrtProduct:
        return -std::tanh(x) * (std::sqrt(1 + y * y) + y);
      case RewardKind::ExpProduct:
        return a * std::exp(x) * std::exp(y);
      case RewardKind::ExpProductPlusBilinear:
        return a * std::exp(x) * std::exp(y) + c * x * y;
      case RewardKind::Expr:
        return (*expression)(x, y);
    }
    return 0.0;
  }

  SmClassification intended() const {
    auto sign = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    switch (kind) {
      case RewardKind::CanonicalSm:
        return {-1, 1};
      case RewardKind::NegatedCanonical:
        return {1, -1};
      case RewardKind::TanhSqrtProduct:
        return {-1, -1};
      case RewardKind::ExpProduct:
        return {sign(a), sign(a)};
      case RewardKind::ExpProductPlusBilinear:
        return {sign(a) == sign(c) || c == 0 ? sign(a) : 0, sign(a)};
      case RewardKind::Expr:
        return {};
    }
    return {};
  }

  std::string name() const {
    switch (kind) {
      case RewardKind::CanonicalSm:
        return "canonical_sm";
      case RewardKind::NegatedCanonical:
        return "negated_canonical";
      case RewardKind::TanhSqrtProduct:
        return "tanh_sqrt_product";
      case RewardKind::ExpProduct:
        return "exp_product(" + format_double(a) + ")";
      case RewardKind::ExpProductPlusBilinear:
        return "exp_product_plus_bilinear(" + format_double(c) + ", " + format_double(a) + ")";
      case RewardKind::Expr:
        return expression->text();
    }
    return "unknown";
  }

 private:
  static std::string format_double(double v) {
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
};

/// Catalog names (canonical_sm, negated_canonical, tanh_sqrt_product,
/// exp_product[(a)], exp_product_plus_bilinear(c[, a])) or an expression.
inline RewardSpec parse_reward(std::string_view text) {
  auto args_of = [&](std::string_view prefix) -> std::optional<std::vector<double>> {
    if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
    std::string_view rest = text.substr(prefix.size());
    std::vector<double> out;
    if (rest.empty()) return out;
    if (rest.front() != '(' || rest.back() != ')') return std::nullopt;
    std::string inner(rest.substr(1, rest.size() - 2));
    std::size_t start = 0;
    while (start <= inner.size()) {
      std::size_t comma = inner.find(',', start);
      std::string piece = inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      try {
        out.push_back(Expression::parse(piece)(0.0, 0.0));
      } catch (const Error&) {
        return std::nullopt;
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  };
  if (text == "canonical_sm") return RewardSpec::canonical();
  if (text == "negated_canonical") return RewardSpec::negated_canonical();
  if (text == "tanh_sqrt_product") return RewardSpec::tanh_sqrt_product();
  if (auto args = args_of("exp_product_plus_bilinear"); args && !args->empty() && args->size() <= 2) {
    return RewardSpec::exp_product_plus_bilinear((*args)[0], args->size() == 2 ? (*args)[1] : 1.0);
  }
  if (auto args = args_of("exp_product"); args && args->size() <= 1) {
    return RewardSpec::exp_product(args->empty() ? 1.0 : (*args)[0]);
  }
  return RewardSpec::expr(text);
}

}  // namespace smt
