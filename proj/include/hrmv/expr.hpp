#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hrmv/value.hpp"

namespace hrmv {

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, And, Or, Xor, Implies, Eq, Neq, Lt, Le, Gt, Ge };

/// Immutable, sort-checked expression over named variables. This is the
/// relation language of tasks and property formulas: total arithmetic and
/// boolean operators plus if-then-else. Division is only accepted by a
/// nonzero constant divisor, which keeps every expression total.
class Expr {
public:
  enum class Kind { Const, Var, Unary, Binary, Ite };

  Expr();  // the constant `true`

  static Expr constant(Value v);
  static Expr boolean(bool b) { return constant(Value::boolean(b)); }
  static Expr integer(long z) { return constant(Value::integer(z)); }
  static Expr real(const mpq_class& q) { return constant(Value::real(q)); }
  static Expr var(std::string name, Sort sort);
  static Expr unary(UnaryOp op, Expr arg);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr ite(Expr cond, Expr then_e, Expr else_e);

  Kind kind() const;
  Sort sort() const;
  const Value& value() const;       // Const
  const std::string& name() const;  // Var
  UnaryOp unary_op() const;
  BinaryOp binary_op() const;
  const std::vector<Expr>& args() const;

  bool is_true() const;
  bool is_false() const;

  /// Evaluates under `env`; every free variable must be bound.
  Value eval(const Valuation& env) const;

  std::set<std::string> vars() const;
  std::map<std::string, Sort> typed_vars() const;

  Expr rename(const std::function<std::string(const std::string&)>& fn) const;
  /// Simultaneous substitution of variables by expressions.
  Expr substitute(const std::map<std::string, Expr>& sub) const;

  /// Linear in the sense of QF_LRA/QF_LIA: every product has a
  /// variable-free side.
  bool is_linear() const;
  bool has_vars() const;

  std::string to_smt(const std::function<std::string(const std::string&)>& symbol) const;
  /// Lustre-style infix rendering with minimal parentheses.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator<(const Expr& a, const Expr& b) { return a.to_string() < b.to_string(); }

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr conjunction(const std::vector<Expr>& parts);
Expr operator&&(const Expr& a, const Expr& b);
Expr operator||(const Expr& a, const Expr& b);
Expr operator!(const Expr& a);
Expr implies(const Expr& a, const Expr& b);
Expr equals(const Expr& a, const Expr& b);

std::string_view binary_op_text(BinaryOp op);
std::string_view binary_op_smt(BinaryOp op);
/// Lustre precedence, larger binds tighter.
int binary_op_precedence(BinaryOp op);

/// SMT-LIB 2 rendering of a constant value.
std::string value_to_smt(const Value& v);

} // namespace hrmv
