#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hhls {

enum class UnaryOp { Neg, Not, BitNot };

enum class BinaryOp {
  Mul, Div, Mod,
  Add, Sub,
  Shl, Shr,
  Lt, Le, Gt, Ge,
  Eq, Ne,
  BitAnd, BitXor, BitOr,
  And, Or,
};

int precedence(BinaryOp op);
const char* symbol(BinaryOp op);
const char* symbol(UnaryOp op);

// Immutable integer expression tree. Values are 32-bit two's complement; every
// operator result wraps to 32 bits, matching the synthesized datapath.
class Expr {
 public:
  enum class Kind { Literal, Name, Unary, Binary };

  Expr() : Expr(literal(0)) {}

  static Expr literal(std::int64_t value);
  static Expr name(std::string identifier);
  static Expr unary(UnaryOp op, Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  Kind kind() const { return node_->kind; }
  std::int64_t value() const { return node_->value; }
  const std::string& identifier() const { return node_->identifier; }
  UnaryOp unary_op() const { return node_->unary; }
  BinaryOp binary_op() const { return node_->binary; }
  const Expr& lhs() const { return node_->children[0]; }
  const Expr& rhs() const { return node_->children[1]; }

  // Every identifier referenced, in first-occurrence order.
  std::vector<std::string> names() const;

  // Renders with the minimum parentheses needed to re-parse to the same tree.
  // `rename` maps identifiers (used by the RTL emitter).
  std::string render(const std::function<std::string(const std::string&)>& rename = {}) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    Kind kind = Kind::Literal;
    std::int64_t value = 0;
    std::string identifier;
    UnaryOp unary = UnaryOp::Neg;
    BinaryOp binary = BinaryOp::Add;
    std::vector<Expr> children;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

std::int32_t wrap32(std::int64_t value);

// Evaluates with `lookup` resolving identifiers to their current values.
std::int32_t evaluate(const Expr& expr,
                      const std::function<std::int32_t(const std::string&)>& lookup);

}  // namespace hhls
