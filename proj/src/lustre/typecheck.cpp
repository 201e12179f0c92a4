#include "hrmv/lustre/typecheck.hpp"

#include <functional>
#include <set>

namespace hrmv::lustre {

namespace {

bool numeric(Sort s) { return s == Sort::Int || s == Sort::Real; }

std::string sname(Sort s) { return std::string(sort_name(s)); }

bool nonzero_literal(const LExprPtr& e)
{
  if (e->kind == LExpr::Kind::Unary && e->uop == UnaryOp::Neg) return nonzero_literal(e->args[0]);
  return e->kind == LExpr::Kind::Literal && e->value.sort() == Sort::Real &&
         e->value.as_rational() != 0;
}

} // namespace

Sort infer_sort(const Program& p, const Node& n, const LExprPtr& e)
{
  auto fail = [&](const std::string& msg) -> Sort { throw SourceError(e->span, msg); };
  switch (e->kind) {
  case LExpr::Kind::Literal: return e->value.sort();
  case LExpr::Kind::Var: {
    const Param* v = n.find_var(e->name);
    if (!v) return fail("unknown variable '" + e->name + "' in node " + n.name);
    return v->sort;
  }
  case LExpr::Kind::Call:
    (void)p;
    return fail("node call " + e->name + " must be the whole right-hand side of an equation");
  case LExpr::Kind::Unary: {
    Sort a = infer_sort(p, n, e->args[0]);
    if (e->uop == UnaryOp::Not && a != Sort::Bool) return fail("'not' expects bool, got " + sname(a));
    if (e->uop == UnaryOp::Neg && !numeric(a)) return fail("'-' expects a number, got " + sname(a));
    return a;
  }
  case LExpr::Kind::Pre: return infer_sort(p, n, e->args[0]);
  case LExpr::Kind::Arrow: {
    Sort a = infer_sort(p, n, e->args[0]);
    Sort b = infer_sort(p, n, e->args[1]);
    if (a != b) return fail("'->' operands differ: " + sname(a) + " and " + sname(b));
    return a;
  }
  case LExpr::Kind::Ite: {
    if (infer_sort(p, n, e->args[0]) != Sort::Bool) return fail("if-condition must be bool");
    Sort a = infer_sort(p, n, e->args[1]);
    Sort b = infer_sort(p, n, e->args[2]);
    if (a != b) return fail("if-branches differ: " + sname(a) + " and " + sname(b));
    return a;
  }
  case LExpr::Kind::Binary: break;
  }
  Sort a = infer_sort(p, n, e->args[0]);
  Sort b = infer_sort(p, n, e->args[1]);
  const std::string op(binary_op_text(e->bop));
  switch (e->bop) {
  case BinaryOp::Add:
  case BinaryOp::Sub:
  case BinaryOp::Mul:
    if (!numeric(a) || a != b) return fail("'" + op + "' on " + sname(a) + " and " + sname(b));
    return a;
  case BinaryOp::Div:
    if (a != Sort::Real || b != Sort::Real) return fail("'/' is only supported on reals");
    if (!nonzero_literal(e->args[1])) return fail("division requires a nonzero literal divisor");
    return a;
  case BinaryOp::And:
  case BinaryOp::Or:
  case BinaryOp::Xor:
  case BinaryOp::Implies:
    if (a != Sort::Bool || b != Sort::Bool) return fail("'" + op + "' expects bool operands");
    return Sort::Bool;
  case BinaryOp::Eq:
  case BinaryOp::Neq:
    if (a != b) return fail("'" + op + "' on " + sname(a) + " and " + sname(b));
    return Sort::Bool;
  default:
    if (!numeric(a) || a != b) return fail("'" + op + "' on " + sname(a) + " and " + sname(b));
    return Sort::Bool;
  }
}

void typecheck(const Program& p)
{
  std::set<std::string> node_names;
  for (const auto& n : p.nodes)
    if (!node_names.insert(n.name).second) throw SourceError(n.span, "duplicate node " + n.name);

  for (const auto& n : p.nodes) {
    std::set<std::string> declared;
    for (const auto* list : {&n.inputs, &n.outputs, &n.locals})
      for (const auto& v : *list)
        if (!declared.insert(v.name).second)
          throw SourceError(v.span, "duplicate declaration of " + v.name + " in node " + n.name);

    std::map<std::string, int> defined;
    for (const auto& eq : n.equations) {
      for (const auto& x : eq.lhs) {
        const Param* v = n.find_var(x);
        if (!v) throw SourceError(eq.span, "equation defines undeclared " + x);
        for (const auto& in : n.inputs)
          if (in.name == x) throw SourceError(eq.span, "equation defines input " + x);
        if (++defined[x] > 1) throw SourceError(eq.span, x + " is defined twice");
      }
      if (eq.rhs->kind == LExpr::Kind::Call) {
        const Node* callee = p.find(eq.rhs->name);
        if (!callee) throw SourceError(eq.rhs->span, "unknown node " + eq.rhs->name);
        if (callee->inputs.size() != eq.rhs->args.size())
          throw SourceError(eq.rhs->span, "call to " + callee->name + " has " +
                                              std::to_string(eq.rhs->args.size()) + " arguments, expected " +
                                              std::to_string(callee->inputs.size()));
        if (callee->outputs.size() != eq.lhs.size())
          throw SourceError(eq.span, "call to " + callee->name + " returns " +
                                         std::to_string(callee->outputs.size()) + " values, " +
                                         std::to_string(eq.lhs.size()) + " expected");
        for (std::size_t i = 0; i < eq.rhs->args.size(); ++i) {
          Sort s = infer_sort(p, n, eq.rhs->args[i]);
          if (s != callee->inputs[i].sort)
            throw SourceError(eq.rhs->args[i]->span, "argument " + std::to_string(i + 1) + " of " +
                                                         callee->name + " should be " +
                                                         sname(callee->inputs[i].sort));
        }
        for (std::size_t i = 0; i < eq.lhs.size(); ++i)
          if (n.find_var(eq.lhs[i])->sort != callee->outputs[i].sort)
            throw SourceError(eq.span, eq.lhs[i] + " does not match the sort of " + callee->name +
                                           "'s result " + callee->outputs[i].name);
      } else {
        if (eq.lhs.size() != 1) throw SourceError(eq.span, "only node calls define several variables");
        Sort s = infer_sort(p, n, eq.rhs);
        if (s != n.find_var(eq.lhs[0])->sort)
          throw SourceError(eq.span, eq.lhs[0] + " is " + sname(n.find_var(eq.lhs[0])->sort) +
                                         " but its definition is " + sname(s));
      }
    }
    for (const auto* list : {&n.outputs, &n.locals})
      for (const auto& v : *list)
        if (!defined.count(v.name)) throw SourceError(v.span, v.name + " is never defined in " + n.name);

    if (n.contract) {
      auto check_formula = [&](const LExprPtr& f, bool is_assume) {
        if (mentions_temporal(f))
          throw SourceError(f->span, "contracts must be state-free (no pre, -> or calls)");
        if (infer_sort(p, n, f) != Sort::Bool) throw SourceError(f->span, "contract formula is not bool");
        std::set<std::string> vars;
        collect_vars(f, vars);
        for (const auto& v : vars) {
          bool input = false, output = false;
          for (const auto& in : n.inputs) input |= in.name == v;
          for (const auto& out : n.outputs) output |= out.name == v;
          if (is_assume && !input) throw SourceError(f->span, "assume mentions non-input " + v);
          if (!is_assume && !input && !output)
            throw SourceError(f->span, "guarantee mentions local " + v);
        }
      };
      for (const auto& a : n.contract->assumes) check_formula(a, true);
      for (const auto& g : n.contract->guarantees) check_formula(g, false);
    }
  }

  // Recursive call chains.
  std::map<std::string, int> state;
  std::function<void(const Node&)> visit = [&](const Node& n) {
    state[n.name] = 1;
    for (const auto& [idx, callee] : n.calls()) {
      if (state[callee] == 1) throw SourceError(n.equations[idx].span, "recursive call to " + callee);
      if (state[callee] == 0) visit(*p.find(callee));
    }
    state[n.name] = 2;
  };
  for (const auto& n : p.nodes)
    if (state[n.name] == 0) visit(n);
}

Expr to_expr(const Node& n, const LExprPtr& e, const std::function<std::string(const std::string&)>& name)
{
  switch (e->kind) {
  case LExpr::Kind::Literal: return Expr::constant(e->value);
  case LExpr::Kind::Var: {
    const Param* v = n.find_var(e->name);
    if (!v) throw SourceError(e->span, "unknown variable '" + e->name + "'");
    return Expr::var(name(e->name), v->sort);
  }
  case LExpr::Kind::Unary: {
    Expr a = to_expr(n, e->args[0], name);
    if (e->uop == UnaryOp::Neg && a.kind() == Expr::Kind::Const)
      return Expr::constant(a.sort() == Sort::Int ? Value::integer(-a.value().as_integer())
                                                  : Value::real(-a.value().as_rational()));
    return Expr::unary(e->uop, a);
  }
  case LExpr::Kind::Binary:
    return Expr::binary(e->bop, to_expr(n, e->args[0], name), to_expr(n, e->args[1], name));
  case LExpr::Kind::Ite:
    return Expr::ite(to_expr(n, e->args[0], name), to_expr(n, e->args[1], name),
                     to_expr(n, e->args[2], name));
  default: throw SourceError(e->span, "temporal operator in a state-free position");
  }
}

std::vector<std::string> reachable_nodes(const Program& p, const std::string& main)
{
  std::vector<std::string> order;
  std::set<std::string> seen;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    if (!seen.insert(name).second) return;
    const Node* n = p.find(name);
    if (!n) throw Error("unknown node '" + name + "'");
    for (const auto& [idx, callee] : n->calls()) visit(callee);
    order.push_back(name);
  };
  visit(main);
  return order;
}

std::string default_main(const Program& p)
{
  if (p.nodes.empty()) throw Error("the program has no nodes");
  return p.nodes.back().name;
}

} // namespace hrmv::lustre
