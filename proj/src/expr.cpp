#include "hrmv/expr.hpp"

#include <sstream>

namespace hrmv {

struct Expr::Node {
  Kind kind = Kind::Const;
  Sort sort = Sort::Bool;
  Value value;
  std::string name;
  UnaryOp uop = UnaryOp::Not;
  BinaryOp bop = BinaryOp::And;
  std::vector<Expr> args;
};

namespace {

bool numeric(Sort s) { return s == Sort::Int || s == Sort::Real; }

[[noreturn]] void type_error(const std::string& msg) { throw Error("type error: " + msg); }

} // namespace

Expr::Expr() : Expr(boolean(true)) {}

Expr Expr::constant(Value v)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->sort = v.sort();
  n->value = std::move(v);
  return Expr(std::move(n));
}

Expr Expr::var(std::string name, Sort sort)
{
  if (name.empty()) type_error("empty variable name");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->sort = sort;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr arg)
{
  if (op == UnaryOp::Neg && !numeric(arg.sort()))
    type_error("negation of non-numeric " + arg.to_string());
  if (op == UnaryOp::Not && arg.sort() != Sort::Bool)
    type_error("'not' applied to non-bool " + arg.to_string());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->sort = arg.sort();
  n->uop = op;
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs)
{
  Sort result = Sort::Bool;
  const std::string where = "(" + lhs.to_string() + ") " + std::string(binary_op_text(op)) +
                            " (" + rhs.to_string() + ")";
  switch (op) {
  case BinaryOp::Add:
  case BinaryOp::Sub:
  case BinaryOp::Mul:
    if (!numeric(lhs.sort()) || lhs.sort() != rhs.sort())
      type_error("arithmetic operands must share a numeric sort in " + where);
    result = lhs.sort();
    break;
  case BinaryOp::Div:
    if (lhs.sort() != Sort::Real || rhs.sort() != Sort::Real)
      type_error("division is only defined on reals in " + where);
    if (rhs.has_vars() || rhs.eval({}).as_rational() == 0)
      type_error("division requires a nonzero constant divisor in " + where);
    result = Sort::Real;
    break;
  case BinaryOp::And:
  case BinaryOp::Or:
  case BinaryOp::Xor:
  case BinaryOp::Implies:
    if (lhs.sort() != Sort::Bool || rhs.sort() != Sort::Bool)
      type_error("boolean operator on non-bool operands in " + where);
    break;
  case BinaryOp::Eq:
  case BinaryOp::Neq:
    if (lhs.sort() != rhs.sort()) type_error("comparison of different sorts in " + where);
    break;
  case BinaryOp::Lt:
  case BinaryOp::Le:
  case BinaryOp::Gt:
  case BinaryOp::Ge:
    if (!numeric(lhs.sort()) || lhs.sort() != rhs.sort())
      type_error("ordering needs numeric operands of one sort in " + where);
    break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->sort = result;
  n->bop = op;
  n->args = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::ite(Expr cond, Expr then_e, Expr else_e)
{
  if (cond.sort() != Sort::Bool) type_error("if-condition is not bool: " + cond.to_string());
  if (then_e.sort() != else_e.sort())
    type_error("if-branches differ in sort: " + then_e.to_string() + " / " + else_e.to_string());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ite;
  n->sort = then_e.sort();
  n->args = {std::move(cond), std::move(then_e), std::move(else_e)};
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
Sort Expr::sort() const { return node_->sort; }
const Value& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
UnaryOp Expr::unary_op() const { return node_->uop; }
BinaryOp Expr::binary_op() const { return node_->bop; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool Expr::is_true() const
{
  return kind() == Kind::Const && sort() == Sort::Bool && value().as_bool();
}

bool Expr::is_false() const
{
  return kind() == Kind::Const && sort() == Sort::Bool && !value().as_bool();
}

Value Expr::eval(const Valuation& env) const
{
  switch (kind()) {
  case Kind::Const: return value();
  case Kind::Var: {
    auto it = env.find(name());
    if (it == env.end()) throw Error("unbound variable '" + name() + "'");
    if (it->second.sort() != sort())
      throw Error("variable '" + name() + "' bound to a value of the wrong sort");
    return it->second;
  }
  case Kind::Unary: {
    Value a = args()[0].eval(env);
    if (unary_op() == UnaryOp::Not) return Value::boolean(!a.as_bool());
    mpq_class q = -a.as_rational();
    return sort() == Sort::Int ? Value::integer(q.get_num()) : Value::real(q);
  }
  case Kind::Ite:
    return args()[0].eval(env).as_bool() ? args()[1].eval(env) : args()[2].eval(env);
  case Kind::Binary: break;
  }

  const BinaryOp op = binary_op();
  // Short-circuit the boolean connectives.
  if (op == BinaryOp::And) {
    return Value::boolean(args()[0].eval(env).as_bool() && args()[1].eval(env).as_bool());
  }
  if (op == BinaryOp::Or) {
    return Value::boolean(args()[0].eval(env).as_bool() || args()[1].eval(env).as_bool());
  }
  if (op == BinaryOp::Implies) {
    return Value::boolean(!args()[0].eval(env).as_bool() || args()[1].eval(env).as_bool());
  }
  Value a = args()[0].eval(env);
  Value b = args()[1].eval(env);
  auto make_num = [&](const mpq_class& q) {
    return sort() == Sort::Int ? Value::integer(q.get_num()) : Value::real(q);
  };
  switch (op) {
  case BinaryOp::Add: return make_num(a.as_rational() + b.as_rational());
  case BinaryOp::Sub: return make_num(a.as_rational() - b.as_rational());
  case BinaryOp::Mul: return make_num(a.as_rational() * b.as_rational());
  case BinaryOp::Div: return make_num(a.as_rational() / b.as_rational());
  case BinaryOp::Xor: return Value::boolean(a.as_bool() != b.as_bool());
  case BinaryOp::Eq: return Value::boolean(a == b);
  case BinaryOp::Neq: return Value::boolean(!(a == b));
  case BinaryOp::Lt: return Value::boolean(a.as_rational() < b.as_rational());
  case BinaryOp::Le: return Value::boolean(a.as_rational() <= b.as_rational());
  case BinaryOp::Gt: return Value::boolean(a.as_rational() > b.as_rational());
  case BinaryOp::Ge: return Value::boolean(a.as_rational() >= b.as_rational());
  default: break;
  }
  throw Error("unreachable operator in eval");
}

std::set<std::string> Expr::vars() const
{
  std::set<std::string> out;
  for (const auto& [name, sort] : typed_vars()) out.insert(name);
  return out;
}

std::map<std::string, Sort> Expr::typed_vars() const
{
  std::map<std::string, Sort> out;
  std::vector<const Expr*> stack{this};
  while (!stack.empty()) {
    const Expr* e = stack.back();
    stack.pop_back();
    if (e->kind() == Kind::Var) out.emplace(e->name(), e->sort());
    for (const auto& a : e->args()) stack.push_back(&a);
  }
  return out;
}

bool Expr::has_vars() const
{
  if (kind() == Kind::Var) return true;
  for (const auto& a : args())
    if (a.has_vars()) return true;
  return false;
}

Expr Expr::rename(const std::function<std::string(const std::string&)>& fn) const
{
  switch (kind()) {
  case Kind::Const: return *this;
  case Kind::Var: return var(fn(name()), sort());
  case Kind::Unary: return unary(unary_op(), args()[0].rename(fn));
  case Kind::Binary: return binary(binary_op(), args()[0].rename(fn), args()[1].rename(fn));
  case Kind::Ite: return ite(args()[0].rename(fn), args()[1].rename(fn), args()[2].rename(fn));
  }
  return *this;
}

Expr Expr::substitute(const std::map<std::string, Expr>& sub) const
{
  switch (kind()) {
  case Kind::Const: return *this;
  case Kind::Var: {
    auto it = sub.find(name());
    if (it == sub.end()) return *this;
    if (it->second.sort() != sort())
      type_error("substituting " + it->second.to_string() + " for " + name() + " changes its sort");
    return it->second;
  }
  case Kind::Unary: return unary(unary_op(), args()[0].substitute(sub));
  case Kind::Binary:
    return binary(binary_op(), args()[0].substitute(sub), args()[1].substitute(sub));
  case Kind::Ite:
    return ite(args()[0].substitute(sub), args()[1].substitute(sub), args()[2].substitute(sub));
  }
  return *this;
}

bool Expr::is_linear() const
{
  if (kind() == Kind::Binary && binary_op() == BinaryOp::Mul && args()[0].has_vars() &&
      args()[1].has_vars())
    return false;
  for (const auto& a : args())
    if (!a.is_linear()) return false;
  return true;
}

std::string value_to_smt(const Value& v)
{
  switch (v.sort()) {
  case Sort::Unit: return "true";
  case Sort::Bool: return v.as_bool() ? "true" : "false";
  case Sort::Int: {
    mpz_class z = v.as_integer();
    if (z < 0) return "(- " + mpz_class(-z).get_str() + ")";
    return z.get_str();
  }
  case Sort::Real: {
    const mpq_class& q = v.as_rational();
    mpz_class num = q.get_num();
    const bool negative = num < 0;
    if (negative) num = -num;
    std::string body = q.get_den() == 1 ? num.get_str() + ".0"
                                        : "(/ " + num.get_str() + ".0 " + q.get_den().get_str() + ".0)";
    return negative ? "(- " + body + ")" : body;
  }
  }
  return "?";
}

std::string Expr::to_smt(const std::function<std::string(const std::string&)>& symbol) const
{
  switch (kind()) {
  case Kind::Const: return value_to_smt(value());
  case Kind::Var: return symbol(name());
  case Kind::Unary:
    return std::string(unary_op() == UnaryOp::Neg ? "(- " : "(not ") + args()[0].to_smt(symbol) +
           ")";
  case Kind::Binary:
    if (binary_op() == BinaryOp::Neq)
      return "(not (= " + args()[0].to_smt(symbol) + " " + args()[1].to_smt(symbol) + "))";
    return "(" + std::string(binary_op_smt(binary_op())) + " " + args()[0].to_smt(symbol) + " " +
           args()[1].to_smt(symbol) + ")";
  case Kind::Ite:
    return "(ite " + args()[0].to_smt(symbol) + " " + args()[1].to_smt(symbol) + " " +
           args()[2].to_smt(symbol) + ")";
  }
  return "?";
}

namespace {

constexpr int kIfPrecedence = 0;
constexpr int kNotPrecedence = 6;
constexpr int kNegPrecedence = 10;
constexpr int kAtomPrecedence = 11;

int precedence_of(const Expr& e)
{
  switch (e.kind()) {
  case Expr::Kind::Const:
    if ((e.sort() == Sort::Int || e.sort() == Sort::Real) && e.value().as_rational() < 0)
      return kNegPrecedence;
    return kAtomPrecedence;
  case Expr::Kind::Var: return kAtomPrecedence;
  case Expr::Kind::Unary: return e.unary_op() == UnaryOp::Not ? kNotPrecedence : kNegPrecedence;
  case Expr::Kind::Binary: return binary_op_precedence(e.binary_op());
  case Expr::Kind::Ite: return kIfPrecedence;
  }
  return kAtomPrecedence;
}

bool right_assoc(BinaryOp op) { return op == BinaryOp::Implies; }

std::string literal_text(const Value& v)
{
  if (v.sort() != Sort::Real) return v.to_string();
  // Reals print as decimals when the denominator allows it, else as a quotient.
  const mpq_class& q = v.as_rational();
  mpz_class den = q.get_den();
  unsigned twos = 0, fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) return "(" + mpz_class(q.get_num()).get_str() + ".0 / " + q.get_den().get_str() + ".0)";
  unsigned digits = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class scaled = q.get_num() * (scale / q.get_den());
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.get_str();
  if (digits == 0) return (negative ? "-" : "") + s + ".0";
  if (s.size() <= digits) s = std::string(digits - s.size() + 1, '0') + s;
  s.insert(s.size() - digits, ".");
  return (negative ? "-" : "") + s;
}

std::string render(const Expr& e);

std::string wrap(const Expr& e, int min_prec)
{
  std::string s = render(e);
  return precedence_of(e) < min_prec ? "(" + s + ")" : s;
}

std::string render(const Expr& e)
{
  switch (e.kind()) {
  case Expr::Kind::Const: return literal_text(e.value());
  case Expr::Kind::Var: return e.name();
  case Expr::Kind::Unary:
    if (e.unary_op() == UnaryOp::Not) return "not " + wrap(e.args()[0], kNotPrecedence);
    return "-" + wrap(e.args()[0], kAtomPrecedence);
  case Expr::Kind::Ite:
    return "if " + render(e.args()[0]) + " then " + render(e.args()[1]) + " else " +
           render(e.args()[2]);
  case Expr::Kind::Binary: {
    const int p = binary_op_precedence(e.binary_op());
    const bool ra = right_assoc(e.binary_op());
    return wrap(e.args()[0], ra ? p + 1 : p) + " " + std::string(binary_op_text(e.binary_op())) +
           " " + wrap(e.args()[1], ra ? p : p + 1);
  }
  }
  return "?";
}

} // namespace

std::string Expr::to_string() const { return render(*this); }

bool operator==(const Expr& a, const Expr& b)
{
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.sort() != b.sort()) return false;
  switch (a.kind()) {
  case Expr::Kind::Const: return a.value() == b.value();
  case Expr::Kind::Var: return a.name() == b.name();
  case Expr::Kind::Unary:
    if (a.unary_op() != b.unary_op()) return false;
    break;
  case Expr::Kind::Binary:
    if (a.binary_op() != b.binary_op()) return false;
    break;
  case Expr::Kind::Ite: break;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  return true;
}

Expr conjunction(const std::vector<Expr>& parts)
{
  std::vector<Expr> kept;
  for (const auto& p : parts)
    if (!p.is_true()) kept.push_back(p);
  if (kept.empty()) return Expr::boolean(true);
  Expr acc = kept.front();
  for (std::size_t i = 1; i < kept.size(); ++i) acc = Expr::binary(BinaryOp::And, acc, kept[i]);
  return acc;
}

Expr operator&&(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::And, a, b); }
Expr operator||(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Or, a, b); }
Expr operator!(const Expr& a) { return Expr::unary(UnaryOp::Not, a); }
Expr implies(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Implies, a, b); }
Expr equals(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Eq, a, b); }

std::string_view binary_op_text(BinaryOp op)
{
  switch (op) {
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "/";
  case BinaryOp::And: return "and";
  case BinaryOp::Or: return "or";
  case BinaryOp::Xor: return "xor";
  case BinaryOp::Implies: return "=>";
  case BinaryOp::Eq: return "=";
  case BinaryOp::Neq: return "<>";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Ge: return ">=";
  }
  return "?";
}

std::string_view binary_op_smt(BinaryOp op)
{
  switch (op) {
  case BinaryOp::And: return "and";
  case BinaryOp::Or: return "or";
  case BinaryOp::Xor: return "xor";
  case BinaryOp::Implies: return "=>";
  case BinaryOp::Eq: return "=";
  case BinaryOp::Neq: return "distinct";
  default: return binary_op_text(op);
  }
}

int binary_op_precedence(BinaryOp op)
{
  switch (op) {
  case BinaryOp::Implies: return 2;
  case BinaryOp::Or:
  case BinaryOp::Xor: return 3;
  case BinaryOp::And: return 4;
  case BinaryOp::Eq:
  case BinaryOp::Neq:
  case BinaryOp::Lt:
  case BinaryOp::Le:
  case BinaryOp::Gt:
  case BinaryOp::Ge: return 5;
  case BinaryOp::Add:
  case BinaryOp::Sub: return 7;
  case BinaryOp::Mul:
  case BinaryOp::Div: return 8;
  }
  return 0;
}

} // namespace hrmv
