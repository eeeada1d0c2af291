#ifndef CAUSALPROBE_EXPR_HPP
#define CAUSALPROBE_EXPR_HPP

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "causalprobe/value.hpp"

namespace causalprobe {

// Expression language for structural equations.
//
//   literals     true, false, decimal reals (optional fraction/exponent)
//   unary        not x, -x
//   binary       and, or, +, -, *, min(a,b), max(a,b), ==, !=, <, <=, >, >=
//   functions    relu(x), logistic(x), tanh(x), abs(x), ite(cond, a, b)
//
// Precedence: call > unary > * > +,- > comparisons > and > or.
// Booleans coerce to reals as {0,1}; reals never coerce to booleans.
// Labels (finite-set values) participate only in ==, != and ite branches.

enum class UnaryOp { Not, Neg };
enum class BinaryOp { And, Or, Add, Sub, Mul, Min, Max, Eq, Ne, Lt, Le, Gt, Ge };
enum class FuncOp { Relu, Logistic, Tanh, Abs, Ite };

class Expr;

struct ExprNode {
  enum class Kind { Literal, Var, Unary, Binary, Call } kind;
  Value literal;        // Kind::Literal
  std::string var;      // Kind::Var
  UnaryOp un{};         // Kind::Unary
  BinaryOp bin{};       // Kind::Binary
  FuncOp fn{};          // Kind::Call
  std::vector<Expr> args;
};

// Immutable value-semantic expression handle; safe to share across threads.
class Expr {
 public:
  Expr() = default;

  static Expr literal(Value v);
  static Expr var(std::string name);
  static Expr unary(UnaryOp op, Expr e);
  static Expr binary(BinaryOp op, Expr l, Expr r);
  static Expr call(FuncOp fn, std::vector<Expr> args);

  bool valid() const { return node_ != nullptr; }
  const ExprNode& node() const { return *node_; }

  // Structural identity (same tree shape, ops and literals).
  bool identical(const Expr& other) const;

  // Free variables in order of first appearance.
  std::vector<std::string> free_variables() const;

  // Canonical infix text; parsing it back yields an identical tree.
  std::string to_string() const;

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

// The single logistic used everywhere (expressions, nets, estimators), so
// that compiled graphs reproduce network forward passes bit-for-bit.
inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
// Relu with subgradient 0 at the kink.
inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Static type of the expression given variable types. Unknown entries
// unify with anything; definite mismatches throw TypeError.
ValueType infer_type(const Expr& e,
                     const std::map<std::string, ValueType>& env);

// Deterministic evaluation. `lookup` must return a value for every free
// variable.
Value eval_expr(const Expr& e,
                const std::function<Value(const std::string&)>& lookup);

const char* unary_op_name(UnaryOp op);
const char* binary_op_name(BinaryOp op);
const char* func_op_name(FuncOp fn);

}  // namespace causalprobe

#endif
