#include "qgrad/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>

#include "qgrad/error.hpp"

namespace qgrad::expr {
namespace {

struct FunctionInfo {
  std::string_view name;
  Op op;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Op::Sin, 1}, {"cos", Op::Cos, 1}, {"exp", Op::Exp, 1}, {"ln", Op::Ln, 1},
    {"abs", Op::Abs, 1}, {"min", Op::Min, 2}, {"max", Op::Max, 2},
};

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string_view peek_word() {
    skip_ws();
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
      ++end;
    if (end == pos_ || std::isdigit(static_cast<unsigned char>(text_[pos_]))) return {};
    return text_.substr(pos_, end - pos_);
  }

  bool eat_keyword(std::string_view kw) {
    if (peek_word() == kw) {
      pos_ += kw.size();
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    if (eat_keyword("if")) {
      NodePtr lhs = parse_sum();
      const Cmp cmp = parse_cmp();
      NodePtr rhs = parse_sum();
      if (!eat_keyword("then")) fail("expected 'then'");
      NodePtr then_branch = parse_expr();
      if (!eat_keyword("else")) fail("expected 'else'");
      NodePtr else_branch = parse_expr();
      auto n = std::make_shared<Node>();
      n->op = Op::If;
      n->cmp = cmp;
      n->args = {lhs, rhs, then_branch, else_branch};
      return n;
    }
    return parse_sum();
  }

  Cmp parse_cmp() {
    if (eat("<=") || eat("≤")) return Cmp::LessEq;
    if (eat(">=") || eat("≥")) return Cmp::GreaterEq;
    if (eat("<")) return Cmp::Less;
    if (eat(">")) return Cmp::Greater;
    fail("expected comparison operator");
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    while (true) {
      if (eat("+"))
        lhs = make(Op::Add, {lhs, parse_product()});
      else if (eat("-"))
        lhs = make(Op::Sub, {lhs, parse_product()});
      else
        return lhs;
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (eat("*"))
        lhs = make(Op::Mul, {lhs, parse_unary()});
      else if (eat("/"))
        lhs = make(Op::Div, {lhs, parse_unary()});
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat("-")) return make(Op::Neg, {parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat("^")) return make(Op::Pow, {base, parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (eat("(")) {
      NodePtr inner = parse_expr();
      expect(")");
      return inner;
    }
    const std::string_view word = peek_word();
    if (word.empty()) fail("unexpected character");
    if (word == "if") return parse_expr();
    const std::size_t word_pos = pos_;
    pos_ += word.size();
    if (word == "x") return make(Op::VarX);
    if (word == "y") return make(Op::VarY);
    if (word == "pi") return make(Op::Number, {}, std::numbers::pi);
    for (const auto& fn : kFunctions) {
      if (fn.name != word) continue;
      expect("(");
      std::vector<NodePtr> args{parse_expr()};
      while (eat(",")) args.push_back(parse_expr());
      expect(")");
      if (static_cast<int>(args.size()) != fn.arity)
        throw ParseError("function '" + std::string(word) + "' takes " +
                             std::to_string(fn.arity) + " argument(s), got " +
                             std::to_string(args.size()),
                         word_pos);
      return make(fn.op, std::move(args));
    }
    throw ParseError("unknown identifier '" + std::string(word) + "'", word_pos);
  }

  NodePtr parse_number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(Op::Number, {}, value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool mentions_y(const Node& n) {
  if (n.op == Op::VarY) return true;
  for (const auto& a : n.args)
    if (mentions_y(*a)) return true;
  return false;
}

double eval_node(const Node& n, double x, double y) {
  auto arg = [&](int i) { return eval_node(*n.args[i], x, y); };
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::VarX: return x;
    case Op::VarY: return y;
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: return arg(0) / arg(1);
    case Op::Pow: return std::pow(arg(0), arg(1));
    case Op::Neg: return -arg(0);
    case Op::Sin: return std::sin(arg(0));
    case Op::Cos: return std::cos(arg(0));
    case Op::Exp: return std::exp(arg(0));
    case Op::Ln: {
      const double a = arg(0);
      if (!(a > 0.0)) throw EvalDomainError("logarithm of nonpositive value", x, y);
      return std::log(a);
    }
    case Op::Abs: return std::abs(arg(0));
    case Op::Min: return std::min(arg(0), arg(1));
    case Op::Max: return std::max(arg(0), arg(1));
    case Op::If: {
      const double lhs = arg(0);
      const double rhs = arg(1);
      bool take = false;
      switch (n.cmp) {
        case Cmp::Less: take = lhs < rhs; break;
        case Cmp::LessEq: take = lhs <= rhs; break;
        case Cmp::Greater: take = lhs > rhs; break;
        case Cmp::GreaterEq: take = lhs >= rhs; break;
      }
      return take ? arg(2) : arg(3);
    }
  }
  return 0.0;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print_node(const Node& n) {
  auto p = [&](int i) { return print_node(*n.args[i]); };
  auto bin = [&](const char* op) { return "(" + p(0) + " " + op + " " + p(1) + ")"; };
  switch (n.op) {
    case Op::Number: return "(" + format_number(n.value) + ")";
    case Op::VarX: return "x";
    case Op::VarY: return "y";
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Div: return bin("/");
    case Op::Pow: return bin("^");
    case Op::Neg: return "(-" + p(0) + ")";
    case Op::Sin: return "sin(" + p(0) + ")";
    case Op::Cos: return "cos(" + p(0) + ")";
    case Op::Exp: return "exp(" + p(0) + ")";
    case Op::Ln: return "ln(" + p(0) + ")";
    case Op::Abs: return "abs(" + p(0) + ")";
    case Op::Min: return "min(" + p(0) + ", " + p(1) + ")";
    case Op::Max: return "max(" + p(0) + ", " + p(1) + ")";
    case Op::If: {
      static constexpr const char* kCmp[] = {"<", "<=", ">", ">="};
      return "(if " + p(0) + " " + kCmp[static_cast<int>(n.cmp)] + " " + p(1) + " then " +
             p(2) + " else " + p(3) + ")";
    }
  }
  return {};
}

}  // namespace

Expr::Expr(NodePtr root) : root_(std::move(root)), uses_y_(root_ && mentions_y(*root_)) {}

double Expr::eval(double x, double y) const {
  const double v = eval_node(*root_, x, y);
  if (!std::isfinite(v)) throw EvalDomainError("expression is not finite", x, y);
  return v;
}

std::string Expr::print() const { return print_node(*root_); }

Expr parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

Field sample(const Expr& e, const Mesh& mesh) {
  if (e.uses_y() && mesh.dim() < 2)
    throw DimensionError("expression uses 'y' on a one-dimensional mesh");
  Field out(mesh.size());
  for (int k = 0; k < mesh.size(); ++k) {
    const auto c = mesh.coords(k);
    try {
      out[k] = e.eval(c[0], c[1]);
    } catch (const EvalDomainError& err) {
      char where[96];
      if (mesh.dim() == 2)
        std::snprintf(where, sizeof where, " at node (%.17g, %.17g)", c[0], c[1]);
      else
        std::snprintf(where, sizeof where, " at node x = %.17g", c[0]);
      throw EvalDomainError(std::string(err.what()) + where, c[0], c[1]);
    }
  }
  return out;
}

}  // namespace qgrad::expr
