#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qgrad/mesh.hpp"

namespace qgrad::expr {

enum class Op {
  Number,
  VarX,
  VarY,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Exp,
  Ln,
  Abs,
  Min,
  Max,
  If,
};

enum class Cmp { Less, LessEq, Greater, GreaterEq };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable AST node. `If` uses args = {lhs, rhs, then, else} with `cmp` set.
struct Node {
  Op op = Op::Number;
  double value = 0.0;
  Cmp cmp = Cmp::Less;
  std::vector<NodePtr> args;
};

/// Parsed coefficient expression over x (and y in 2D).
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root);

  double eval(double x, double y = 0.0) const;
  bool uses_y() const { return uses_y_; }
  const NodePtr& root() const { return root_; }

  /// Canonical fully parenthesized form; parse(print()) evaluates identically.
  std::string print() const;

 private:
  NodePtr root_;
  bool uses_y_ = false;
};

/// Grammar (whitespace-insensitive):
///
///   expr    := 'if' cond 'then' expr 'else' expr | sum
///   cond    := sum ('<' | '<=' | '>' | '>=' | '≤' | '≥') sum
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'pi' | 'x' | 'y' | func '(' expr (',' expr)* ')' | '(' expr ')'
///   func    := sin | cos | exp | ln | abs | min | max
Expr parse(std::string_view text);

/// Evaluates at every interior node. Throws EvalDomainError naming the node
/// coordinate on the first non-finite value or logarithm of a nonpositive number.
Field sample(const Expr& e, const Mesh& mesh);

}  // namespace qgrad::expr
