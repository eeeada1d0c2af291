#include "causalprobe/expr.hpp"

#include <algorithm>
#include <cmath>

#include "causalprobe/errors.hpp"

namespace causalprobe {

Expr Expr::literal(Value v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Literal;
  n->literal = std::move(v);
  return Expr(std::move(n));
}

Expr Expr::var(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Var;
  n->var = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr e) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Unary;
  n->un = op;
  n->args.push_back(std::move(e));
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr l, Expr r) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->bin = op;
  n->args.push_back(std::move(l));
  n->args.push_back(std::move(r));
  return Expr(std::move(n));
}

Expr Expr::call(FuncOp fn, std::vector<Expr> args) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Call;
  n->fn = fn;
  n->args = std::move(args);
  return Expr(std::move(n));
}

bool Expr::identical(const Expr& other) const {
  if (!node_ || !other.node_) return node_ == other.node_;
  const ExprNode& a = *node_;
  const ExprNode& b = *other.node_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Literal:
      if (!value_equal(a.literal, b.literal)) return false;
      break;
    case ExprNode::Kind::Var:
      if (a.var != b.var) return false;
      break;
    case ExprNode::Kind::Unary:
      if (a.un != b.un) return false;
      break;
    case ExprNode::Kind::Binary:
      if (a.bin != b.bin) return false;
      break;
    case ExprNode::Kind::Call:
      if (a.fn != b.fn) return false;
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!a.args[i].identical(b.args[i])) return false;
  return true;
}

namespace {

void collect_free(const Expr& e, std::vector<std::string>& out) {
  const ExprNode& n = e.node();
  if (n.kind == ExprNode::Kind::Var) {
    if (std::find(out.begin(), out.end(), n.var) == out.end())
      out.push_back(n.var);
    return;
  }
  for (const Expr& a : n.args) collect_free(a, out);
}

// Precedence levels for printing; higher binds tighter.
int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Literal:
    case ExprNode::Kind::Var:
    case ExprNode::Kind::Call:
      return 7;
    case ExprNode::Kind::Unary:
      return 6;
    case ExprNode::Kind::Binary:
      switch (n.bin) {
        case BinaryOp::Mul: return 5;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 4;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return 3;
        case BinaryOp::And: return 2;
        case BinaryOp::Or: return 1;
        case BinaryOp::Min:
        case BinaryOp::Max: return 7;  // call syntax
      }
  }
  return 0;
}

bool is_call_syntax(BinaryOp op) {
  return op == BinaryOp::Min || op == BinaryOp::Max;
}

void print(const Expr& e, std::string& out, int parent_prec) {
  const ExprNode& n = e.node();
  int prec = precedence(n);
  switch (n.kind) {
    case ExprNode::Kind::Literal:
      out += format_value(n.literal);
      return;
    case ExprNode::Kind::Var:
      out += n.var;
      return;
    case ExprNode::Kind::Unary: {
      bool paren = prec < parent_prec;
      if (paren) out += '(';
      if (n.un == UnaryOp::Not)
        out += "not ";
      else
        out += '-';
      print(n.args[0], out, prec + 1);
      if (paren) out += ')';
      return;
    }
    case ExprNode::Kind::Binary: {
      if (is_call_syntax(n.bin)) {
        out += binary_op_name(n.bin);
        out += '(';
        print(n.args[0], out, 0);
        out += ", ";
        print(n.args[1], out, 0);
        out += ')';
        return;
      }
      bool paren = prec < parent_prec;
      if (paren) out += '(';
      // Left-associative: left child at same level, right child one higher.
      print(n.args[0], out, prec);
      out += ' ';
      out += binary_op_name(n.bin);
      out += ' ';
      print(n.args[1], out, prec + 1);
      if (paren) out += ')';
      return;
    }
    case ExprNode::Kind::Call: {
      out += func_op_name(n.fn);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(n.args[i], out, 0);
      }
      out += ')';
      return;
    }
  }
}

ValueType unify(ValueType a, ValueType b, const char* what) {
  if (a == ValueType::Unknown) return b;
  if (b == ValueType::Unknown) return a;
  if (a == b) return a;
  // Bool coerces to real in arithmetic contexts; resolved by callers.
  throw TypeError(std::string("type mismatch in ") + what);
}

// Accept bool-as-real coercion; reject labels.
void require_realish(ValueType t, const char* what) {
  if (t == ValueType::Label)
    throw TypeError(std::string("label value used arithmetically in ") + what);
}

void require_boolish(ValueType t, const char* what) {
  if (t == ValueType::Real || t == ValueType::Label)
    throw TypeError(std::string(what) +
                    " requires a boolean operand (compare reals explicitly)");
}

}  // namespace

std::vector<std::string> Expr::free_variables() const {
  std::vector<std::string> out;
  if (node_) collect_free(*this, out);
  return out;
}

std::string Expr::to_string() const {
  std::string out;
  if (node_) print(*this, out, 0);
  return out;
}

ValueType infer_type(const Expr& e,
                     const std::map<std::string, ValueType>& env) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprNode::Kind::Literal:
      return type_of(n.literal);
    case ExprNode::Kind::Var: {
      auto it = env.find(n.var);
      return it == env.end() ? ValueType::Unknown : it->second;
    }
    case ExprNode::Kind::Unary: {
      ValueType t = infer_type(n.args[0], env);
      if (n.un == UnaryOp::Not) {
        require_boolish(t, "'not'");
        return ValueType::Bool;
      }
      require_realish(t, "unary '-'");
      return ValueType::Real;
    }
    case ExprNode::Kind::Binary: {
      ValueType l = infer_type(n.args[0], env);
      ValueType r = infer_type(n.args[1], env);
      switch (n.bin) {
        case BinaryOp::And:
        case BinaryOp::Or:
          require_boolish(l, binary_op_name(n.bin));
          require_boolish(r, binary_op_name(n.bin));
          return ValueType::Bool;
        case BinaryOp::Add:
        case BinaryOp::Sub:
        case BinaryOp::Mul:
        case BinaryOp::Min:
        case BinaryOp::Max:
          require_realish(l, binary_op_name(n.bin));
          require_realish(r, binary_op_name(n.bin));
          return ValueType::Real;
        case BinaryOp::Eq:
        case BinaryOp::Ne: {
          // Labels compare only with labels; bool/real mix via coercion.
          if ((l == ValueType::Label) != (r == ValueType::Label) &&
              l != ValueType::Unknown && r != ValueType::Unknown)
            throw TypeError("label compared with non-label");
          return ValueType::Bool;
        }
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
          require_realish(l, binary_op_name(n.bin));
          require_realish(r, binary_op_name(n.bin));
          return ValueType::Bool;
      }
      return ValueType::Unknown;
    }
    case ExprNode::Kind::Call: {
      if (n.fn == FuncOp::Ite) {
        ValueType c = infer_type(n.args[0], env);
        require_boolish(c, "ite condition");
        ValueType a = infer_type(n.args[1], env);
        ValueType b = infer_type(n.args[2], env);
        if ((a == ValueType::Bool && b == ValueType::Real) ||
            (a == ValueType::Real && b == ValueType::Bool))
          return ValueType::Real;  // branch coercion
        return unify(a, b, "ite branches");
      }
      ValueType t = infer_type(n.args[0], env);
      require_realish(t, func_op_name(n.fn));
      return ValueType::Real;
    }
  }
  return ValueType::Unknown;
}

namespace {

bool as_bool(const Value& v, const char* what) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  throw EvalError(std::string(what) + " requires a boolean operand");
}

}  // namespace

Value eval_expr(const Expr& e,
                const std::function<Value(const std::string&)>& lookup) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprNode::Kind::Literal:
      return n.literal;
    case ExprNode::Kind::Var:
      return lookup(n.var);
    case ExprNode::Kind::Unary: {
      Value v = eval_expr(n.args[0], lookup);
      if (n.un == UnaryOp::Not) return Value(!as_bool(v, "'not'"));
      return Value(-value_as_real(v));
    }
    case ExprNode::Kind::Binary: {
      // and/or are strict (both sides evaluate); equations are total, so
      // short-circuiting would only hide evaluation errors.
      Value l = eval_expr(n.args[0], lookup);
      Value r = eval_expr(n.args[1], lookup);
      switch (n.bin) {
        case BinaryOp::And: return Value(as_bool(l, "and") && as_bool(r, "and"));
        case BinaryOp::Or: return Value(as_bool(l, "or") || as_bool(r, "or"));
        case BinaryOp::Add: return Value(value_as_real(l) + value_as_real(r));
        case BinaryOp::Sub: return Value(value_as_real(l) - value_as_real(r));
        case BinaryOp::Mul: return Value(value_as_real(l) * value_as_real(r));
        case BinaryOp::Min:
          return Value(std::min(value_as_real(l), value_as_real(r)));
        case BinaryOp::Max:
          return Value(std::max(value_as_real(l), value_as_real(r)));
        case BinaryOp::Eq:
        case BinaryOp::Ne: {
          bool eq;
          if (is_label(l) || is_label(r)) {
            if (!is_label(l) || !is_label(r))
              throw EvalError("label compared with non-label");
            eq = std::get<std::string>(l) == std::get<std::string>(r);
          } else if (is_bool(l) && is_bool(r)) {
            eq = std::get<bool>(l) == std::get<bool>(r);
          } else {
            eq = value_as_real(l) == value_as_real(r);
          }
          return Value(n.bin == BinaryOp::Eq ? eq : !eq);
        }
        case BinaryOp::Lt: return Value(value_as_real(l) < value_as_real(r));
        case BinaryOp::Le: return Value(value_as_real(l) <= value_as_real(r));
        case BinaryOp::Gt: return Value(value_as_real(l) > value_as_real(r));
        case BinaryOp::Ge: return Value(value_as_real(l) >= value_as_real(r));
      }
      throw EvalError("unhandled binary operator");
    }
    case ExprNode::Kind::Call: {
      switch (n.fn) {
        case FuncOp::Relu:
          return Value(relu(value_as_real(eval_expr(n.args[0], lookup))));
        case FuncOp::Logistic:
          return Value(logistic(value_as_real(eval_expr(n.args[0], lookup))));
        case FuncOp::Tanh:
          return Value(std::tanh(value_as_real(eval_expr(n.args[0], lookup))));
        case FuncOp::Abs:
          return Value(std::abs(value_as_real(eval_expr(n.args[0], lookup))));
        case FuncOp::Ite: {
          bool c = as_bool(eval_expr(n.args[0], lookup), "ite condition");
          Value a = eval_expr(n.args[1], lookup);
          Value b = eval_expr(n.args[2], lookup);
          // Branches evaluate eagerly: equations must be total either way.
          if (is_bool(a) != is_bool(b) && !is_label(a) && !is_label(b)) {
            // Coerce mixed bool/real branches to real.
            return Value(c ? value_as_real(a) : value_as_real(b));
          }
          return c ? a : b;
        }
      }
      throw EvalError("unhandled function");
    }
  }
  throw EvalError("invalid expression node");
}

const char* unary_op_name(UnaryOp op) {
  return op == UnaryOp::Not ? "not" : "-";
}

const char* binary_op_name(BinaryOp op) {
  switch (op) {
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Min: return "min";
    case BinaryOp::Max: return "max";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

const char* func_op_name(FuncOp fn) {
  switch (fn) {
    case FuncOp::Relu: return "relu";
    case FuncOp::Logistic: return "logistic";
    case FuncOp::Tanh: return "tanh";
    case FuncOp::Abs: return "abs";
    case FuncOp::Ite: return "ite";
  }
  return "?";
}

}  // namespace causalprobe
