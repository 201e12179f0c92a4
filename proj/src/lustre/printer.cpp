#include <sstream>

#include "hrmv/lustre/ast.hpp"

namespace hrmv::lustre {

namespace {

LExprPtr make(LExpr e) { return std::make_shared<const LExpr>(std::move(e)); }

} // namespace

LExprPtr LExpr::literal(Value v, Span s)
{
  LExpr e;
  e.kind = Kind::Literal;
  e.value = std::move(v);
  e.span = s;
  return make(std::move(e));
}

LExprPtr LExpr::var(std::string name, Span s)
{
  LExpr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  e.span = s;
  return make(std::move(e));
}

LExprPtr LExpr::unary(UnaryOp op, LExprPtr a, Span s)
{
  LExpr e;
  e.kind = Kind::Unary;
  e.uop = op;
  e.args = {std::move(a)};
  e.span = s;
  return make(std::move(e));
}

LExprPtr LExpr::binary(BinaryOp op, LExprPtr a, LExprPtr b, Span s)
{
  LExpr e;
  e.kind = Kind::Binary;
  e.bop = op;
  e.args = {std::move(a), std::move(b)};
  e.span = s;
  return make(std::move(e));
}

LExprPtr LExpr::ite(LExprPtr c, LExprPtr t, LExprPtr f, Span s)
{
  LExpr e;
  e.kind = Kind::Ite;
  e.args = {std::move(c), std::move(t), std::move(f)};
  e.span = s;
  return make(std::move(e));
}

LExprPtr LExpr::pre(LExprPtr a, Span s)
{
  LExpr e;
  e.kind = Kind::Pre;
  e.args = {std::move(a)};
  e.span = s;
  return make(std::move(e));
}

LExprPtr LExpr::arrow(LExprPtr a, LExprPtr b, Span s)
{
  LExpr e;
  e.kind = Kind::Arrow;
  e.args = {std::move(a), std::move(b)};
  e.span = s;
  return make(std::move(e));
}

LExprPtr LExpr::call(std::string callee, std::vector<LExprPtr> args, Span s)
{
  LExpr e;
  e.kind = Kind::Call;
  e.name = std::move(callee);
  e.args = std::move(args);
  e.span = s;
  return make(std::move(e));
}

bool same_expr(const LExprPtr& a, const LExprPtr& b)
{
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
  case LExpr::Kind::Literal:
    if (!(a->value == b->value)) return false;
    break;
  case LExpr::Kind::Var:
  case LExpr::Kind::Call:
    if (a->name != b->name) return false;
    break;
  case LExpr::Kind::Unary:
    if (a->uop != b->uop) return false;
    break;
  case LExpr::Kind::Binary:
    if (a->bop != b->bop) return false;
    break;
  default: break;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same_expr(a->args[i], b->args[i])) return false;
  return true;
}

LExprPtr rename_vars(const LExprPtr& e, const std::map<std::string, std::string>& names)
{
  if (e->kind == LExpr::Kind::Var) {
    auto it = names.find(e->name);
    return it == names.end() ? e : LExpr::var(it->second, e->span);
  }
  if (e->args.empty()) return e;
  LExpr copy = *e;
  for (auto& a : copy.args) a = rename_vars(a, names);
  return std::make_shared<const LExpr>(std::move(copy));
}

void collect_vars(const LExprPtr& e, std::set<std::string>& out)
{
  if (e->kind == LExpr::Kind::Var) out.insert(e->name);
  for (const auto& a : e->args) collect_vars(a, out);
}

bool mentions_temporal(const LExprPtr& e)
{
  if (e->kind == LExpr::Kind::Pre || e->kind == LExpr::Kind::Arrow || e->kind == LExpr::Kind::Call)
    return true;
  for (const auto& a : e->args)
    if (mentions_temporal(a)) return true;
  return false;
}

const Param* Node::find_var(const std::string& v) const
{
  for (const auto* list : {&inputs, &outputs, &locals})
    for (const auto& p : *list)
      if (p.name == v) return &p;
  return nullptr;
}

std::vector<std::pair<std::size_t, std::string>> Node::calls() const
{
  std::vector<std::pair<std::size_t, std::string>> out;
  for (std::size_t i = 0; i < equations.size(); ++i)
    if (equations[i].rhs->kind == LExpr::Kind::Call) out.emplace_back(i, equations[i].rhs->name);
  return out;
}

const Node* Program::find(const std::string& name) const
{
  for (const auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

Node* Program::find(const std::string& name)
{
  for (auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

namespace {

bool same_params(const std::vector<Param>& a, const std::vector<Param>& b)
{
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || a[i].sort != b[i].sort) return false;
  return true;
}

bool same_list(const std::vector<LExprPtr>& a, const std::vector<LExprPtr>& b)
{
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_expr(a[i], b[i])) return false;
  return true;
}

} // namespace

bool same_program(const Program& a, const Program& b)
{
  if (a.nodes.size() != b.nodes.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const Node& x = a.nodes[i];
    const Node& y = b.nodes[i];
    if (x.name != y.name || !same_params(x.inputs, y.inputs) || !same_params(x.outputs, y.outputs) ||
        !same_params(x.locals, y.locals) || x.contract.has_value() != y.contract.has_value())
      return false;
    if (x.contract && (!same_list(x.contract->assumes, y.contract->assumes) ||
                       !same_list(x.contract->guarantees, y.contract->guarantees)))
      return false;
    if (x.equations.size() != y.equations.size()) return false;
    for (std::size_t k = 0; k < x.equations.size(); ++k)
      if (x.equations[k].lhs != y.equations[k].lhs || !same_expr(x.equations[k].rhs, y.equations[k].rhs))
        return false;
  }
  return true;
}

namespace {

constexpr int kIte = 0;
constexpr int kArrow = 1;
constexpr int kNot = 6;
constexpr int kPrefix = 10;
constexpr int kAtom = 11;

int precedence(const LExpr& e)
{
  switch (e.kind) {
  case LExpr::Kind::Literal:
  case LExpr::Kind::Var:
  case LExpr::Kind::Call: return kAtom;
  case LExpr::Kind::Unary: return e.uop == UnaryOp::Not ? kNot : kPrefix;
  case LExpr::Kind::Pre: return kPrefix;
  case LExpr::Kind::Binary: return binary_op_precedence(e.bop);
  case LExpr::Kind::Arrow: return kArrow;
  case LExpr::Kind::Ite: return kIte;
  }
  return kAtom;
}

std::string literal(const Value& v)
{
  // Reuse the expression printer, which renders reals as decimals.
  return Expr::constant(v).to_string();
}

std::string show(const LExprPtr& e);

std::string wrap(const LExprPtr& e, int min_prec)
{
  std::string s = show(e);
  return precedence(*e) < min_prec ? "(" + s + ")" : s;
}

bool comparison(BinaryOp op)
{
  return binary_op_precedence(op) == binary_op_precedence(BinaryOp::Eq);
}

std::string show(const LExprPtr& e)
{
  switch (e->kind) {
  case LExpr::Kind::Literal: return literal(e->value);
  case LExpr::Kind::Var: return e->name;
  case LExpr::Kind::Call: {
    std::string s = e->name + "(";
    for (std::size_t i = 0; i < e->args.size(); ++i) s += (i ? ", " : "") + show(e->args[i]);
    return s + ")";
  }
  case LExpr::Kind::Unary:
    if (e->uop == UnaryOp::Not) return "not " + wrap(e->args[0], kNot);
    return "-" + wrap(e->args[0], kAtom);
  case LExpr::Kind::Pre: return "pre " + wrap(e->args[0], kAtom);
  case LExpr::Kind::Arrow: return wrap(e->args[0], kArrow + 1) + " -> " + wrap(e->args[1], kArrow);
  case LExpr::Kind::Ite:
    return "if " + show(e->args[0]) + " then " + show(e->args[1]) + " else " + show(e->args[2]);
  case LExpr::Kind::Binary: {
    const int p = binary_op_precedence(e->bop);
    const std::string op(binary_op_text(e->bop));
    if (e->bop == BinaryOp::Implies)
      return wrap(e->args[0], p + 1) + " " + op + " " + wrap(e->args[1], p);
    if (comparison(e->bop))
      return wrap(e->args[0], p + 1) + " " + op + " " + wrap(e->args[1], p + 1);
    return wrap(e->args[0], p) + " " + op + " " + wrap(e->args[1], p + 1);
  }
  }
  return "?";
}

std::string params(const std::vector<Param>& ps)
{
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i)
    s += (i ? "; " : "") + ps[i].name + " : " + std::string(sort_name(ps[i].sort));
  return s;
}

} // namespace

std::string print_expr(const LExprPtr& e) { return show(e); }

std::string pretty_print(const Program& p)
{
  std::ostringstream out;
  bool first = true;
  for (const auto& n : p.nodes) {
    if (!first) out << "\n";
    first = false;
    out << "node " << n.name << " (" << params(n.inputs) << ")\n";
    out << "returns (" << params(n.outputs) << ");\n";
    if (n.contract) {
      out << "(*@contract\n";
      for (const auto& a : n.contract->assumes) out << "  assume " << show(a) << ";\n";
      for (const auto& g : n.contract->guarantees) out << "  guarantee " << show(g) << ";\n";
      out << "*)\n";
    }
    if (!n.locals.empty()) {
      out << "var\n";
      for (const auto& l : n.locals) out << "  " << l.name << " : " << sort_name(l.sort) << ";\n";
    }
    out << "let\n";
    for (const auto& eq : n.equations) {
      out << "  ";
      for (std::size_t i = 0; i < eq.lhs.size(); ++i) out << (i ? ", " : "") << eq.lhs[i];
      out << " = " << show(eq.rhs) << ";\n";
    }
    out << "tel\n";
  }
  return out.str();
}

} // namespace hrmv::lustre
