#include "hhls/expr.hpp"

#include <algorithm>

namespace hhls {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::BitOr: return 3;
    case BinaryOp::BitXor: return 4;
    case BinaryOp::BitAnd: return 5;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 6;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 7;
    case BinaryOp::Shl:
    case BinaryOp::Shr: return 8;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 9;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 10;
  }
  return 0;
}

const char* symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::BitAnd: return "&";
    case BinaryOp::BitXor: return "^";
    case BinaryOp::BitOr: return "|";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* symbol(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Not: return "!";
    case UnaryOp::BitNot: return "~";
  }
  return "?";
}

Expr Expr::literal(std::int64_t value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Literal;
  node->value = value;
  return Expr(std::move(node));
}

Expr Expr::name(std::string identifier) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Name;
  node->identifier = std::move(identifier);
  return Expr(std::move(node));
}

Expr Expr::unary(UnaryOp op, Expr operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Unary;
  node->unary = op;
  node->children.push_back(std::move(operand));
  return Expr(std::move(node));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Binary;
  node->binary = op;
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  return Expr(std::move(node));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Expr::Kind::Literal: return x.value == y.value;
    case Expr::Kind::Name: return x.identifier == y.identifier;
    case Expr::Kind::Unary: return x.unary == y.unary && x.children == y.children;
    case Expr::Kind::Binary: return x.binary == y.binary && x.children == y.children;
  }
  return false;
}

std::vector<std::string> Expr::names() const {
  std::vector<std::string> out;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (e.kind() == Kind::Name) {
      if (std::find(out.begin(), out.end(), e.identifier()) == out.end())
        out.push_back(e.identifier());
    }
    for (const auto& c : e.node_->children) walk(c);
  };
  walk(*this);
  return out;
}

std::string Expr::render(const std::function<std::string(const std::string&)>& rename) const {
  switch (kind()) {
    case Kind::Literal:
      return std::to_string(value());
    case Kind::Name:
      return rename ? rename(identifier()) : identifier();
    case Kind::Unary: {
      std::string inner = lhs().render(rename);
      bool wrap = lhs().kind() == Kind::Binary ||
                  (lhs().kind() == Kind::Literal && lhs().value() < 0) ||
                  lhs().kind() == Kind::Unary;
      return std::string(symbol(unary_op())) + (wrap ? "(" + inner + ")" : inner);
    }
    case Kind::Binary: {
      int prec = precedence(binary_op());
      auto side = [&](const Expr& child, bool right) {
        std::string text = child.render(rename);
        if (child.kind() == Kind::Binary) {
          int cp = precedence(child.binary_op());
          if (cp < prec || (right && cp == prec)) return "(" + text + ")";
        }
        if (child.kind() == Kind::Literal && child.value() < 0) return "(" + text + ")";
        return text;
      };
      return side(lhs(), false) + " " + symbol(binary_op()) + " " + side(rhs(), true);
    }
  }
  return {};
}

std::int32_t wrap32(std::int64_t value) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(static_cast<std::uint64_t>(value)));
}

std::int32_t evaluate(const Expr& expr,
                      const std::function<std::int32_t(const std::string&)>& lookup) {
  switch (expr.kind()) {
    case Expr::Kind::Literal:
      return wrap32(expr.value());
    case Expr::Kind::Name:
      return lookup(expr.identifier());
    case Expr::Kind::Unary: {
      std::int64_t v = evaluate(expr.lhs(), lookup);
      switch (expr.unary_op()) {
        case UnaryOp::Neg: return wrap32(-v);
        case UnaryOp::Not: return v == 0 ? 1 : 0;
        case UnaryOp::BitNot: return wrap32(~v);
      }
      return 0;
    }
    case Expr::Kind::Binary: {
      std::int64_t a = evaluate(expr.lhs(), lookup);
      std::int64_t b = evaluate(expr.rhs(), lookup);
      auto ua = static_cast<std::uint32_t>(static_cast<std::int32_t>(a));
      switch (expr.binary_op()) {
        case BinaryOp::Mul: return wrap32(a * b);
        // Division by zero yields 0 (the datapath divider's defined output).
        case BinaryOp::Div: return b == 0 ? 0 : wrap32(a / b);
        case BinaryOp::Mod: return b == 0 ? 0 : wrap32(a % b);
        case BinaryOp::Add: return wrap32(a + b);
        case BinaryOp::Sub: return wrap32(a - b);
        case BinaryOp::Shl:
          return (b < 0 || b >= 32) ? 0 : wrap32(static_cast<std::int64_t>(ua) << b);
        case BinaryOp::Shr:
          return (b < 0 || b >= 32) ? (a < 0 ? -1 : 0) : static_cast<std::int32_t>(a >> b);
        case BinaryOp::Lt: return a < b;
        case BinaryOp::Le: return a <= b;
        case BinaryOp::Gt: return a > b;
        case BinaryOp::Ge: return a >= b;
        case BinaryOp::Eq: return a == b;
        case BinaryOp::Ne: return a != b;
        case BinaryOp::BitAnd: return wrap32(a & b);
        case BinaryOp::BitXor: return wrap32(a ^ b);
        case BinaryOp::BitOr: return wrap32(a | b);
        case BinaryOp::And: return (a != 0 && b != 0) ? 1 : 0;
        case BinaryOp::Or: return (a != 0 || b != 0) ? 1 : 0;
      }
      return 0;
    }
  }
  return 0;
}

}  // namespace hhls
