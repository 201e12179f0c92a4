#include "hrmv/lustre/elaborate.hpp"

#include <algorithm>

#include "hrmv/lustre/typecheck.hpp"

namespace hrmv::lustre {

std::string qualify(const std::string& path, const std::string& v)
{
  return path.empty() ? v : path + "." + v;
}

InstanceTree instantiate(const Program& p, const std::string& main)
{
  const Node* root = p.find(main);
  if (!root) throw Error("unknown main node '" + main + "'");
  std::function<InstanceTree(const Node&, const std::string&, const std::string&, int)> build =
      [&](const Node& n, const std::string& path, const std::string& inst, int depth) {
        if (depth > 64) throw Error("call chain through " + n.name + " is too deep (recursive?)");
        InstanceTree t;
        t.path = path;
        t.instance = inst;
        t.node = &n;
        std::map<std::string, int> counter;
        for (const auto& [idx, callee] : n.calls()) {
          const Node* c = p.find(callee);
          if (!c) throw SourceError(n.equations[idx].span, "unknown node " + callee);
          const std::string child = callee + std::to_string(counter[callee]++);
          t.children.push_back(build(*c, qualify(path, child), child, depth + 1));
        }
        return t;
      };
  return build(*root, "", "", 0);
}

namespace {

bool literal_like(const LExprPtr& e)
{
  if (e->kind == LExpr::Kind::Unary && e->uop == UnaryOp::Neg) return literal_like(e->args[0]);
  return e->kind == LExpr::Kind::Literal;
}

Value literal_value(const LExprPtr& e)
{
  if (e->kind == LExpr::Kind::Literal) return e->value;
  Value v = literal_value(e->args[0]);
  return v.sort() == Sort::Int ? Value::integer(-v.as_integer()) : Value::real(-v.as_rational());
}

std::vector<VarId> reads_of(const std::vector<Expr>& es)
{
  std::map<std::string, Sort> typed;
  for (const auto& e : es) typed.merge(e.typed_vars());
  std::vector<VarId> out;
  for (const auto& [n, s] : typed) out.push_back({n, s});
  return out;
}

class Builder {
public:
  Builder(const Program& p, const InstanceTree& t) : prog_(p), tree_(t), node_(*t.node) {}

  Elaboration run()
  {
    Elaboration el;
    el.path = tree_.path;
    el.node_name = node_.name;
    Module& m = el.hier.module;
    m.name = tree_.path.empty() ? node_.name : tree_.path;
    for (const auto& v : node_.inputs) m.inputs.push_back({q(v.name), v.sort});
    for (const auto& v : node_.outputs) m.outputs.push_back({q(v.name), v.sort});

    std::size_t call_index = 0;
    for (const auto& eq : node_.equations) {
      if (eq.rhs->kind == LExpr::Kind::Call) {
        const InstanceTree& ct = tree_.children.at(call_index++);
        Elaboration child = Builder(prog_, ct).run();
        const Module& cm = child.hier.module;
        SubmoduleBinding b;
        b.instance = ct.instance;
        for (const auto& [id, t] : cm.react.edges()) {
          b.edge_ids.insert(id);
          add(t);
        }
        for (const auto& s : cm.states) states_.push_back(s);
        for (const auto& [s, v] : cm.init) init_[s] = v;
        const Node& callee = *ct.node;
        for (std::size_t i = 0; i < callee.inputs.size(); ++i) {
          const std::string target = qualify(ct.path, callee.inputs[i].name);
          define(target, callee.inputs[i].sort, lower(eq.rhs->args[i]));
        }
        for (std::size_t i = 0; i < eq.lhs.size(); ++i)
          define(q(eq.lhs[i]), callee.outputs[i].sort,
                 Expr::var(qualify(ct.path, callee.outputs[i].name), callee.outputs[i].sort));
        b.child = child.hier;
        el.hier.bindings.push_back(std::move(b));
        el.children.push_back(std::move(child));
        continue;
      }
      const std::string x = eq.lhs.front();
      const Sort sort = node_.find_var(x)->sort;
      const LExprPtr& rhs = eq.rhs;
      if (rhs->kind == LExpr::Kind::Arrow && literal_like(rhs->args[0]) &&
          rhs->args[1]->kind == LExpr::Kind::Pre) {
        // x = c -> pre e: x is a register initialised to c.
        const bool is_output = std::any_of(node_.outputs.begin(), node_.outputs.end(),
                                           [&](const Param& o) { return o.name == x; });
        const std::string state = is_output ? q(x) + "$pre" : q(x);
        states_.push_back({state, sort});
        init_[state] = literal_value(rhs->args[0]);
        define(primed(state), sort, lower(rhs->args[1]->args[0]));
        if (is_output) define(q(x), sort, Expr::var(state, sort));
        continue;
      }
      define(q(x), sort, lower(rhs));
    }

    m.states = states_;
    std::sort(m.states.begin(), m.states.end());
    m.init = init_;
    m.react = std::move(graph_);
    auto report = m.validate();
    if (!report.ok()) {
      std::string msg = "node " + node_.name + " does not elaborate to a module";
      if (report.has("i")) msg = "combinational cycle in node " + node_.name;
      throw SourceError(node_.span, msg + ":\n" + report.to_string());
    }

    if (node_.contract) {
      el.has_contract = true;
      auto name = [&](const std::string& v) { return q(v); };
      for (const auto& a : node_.contract->assumes) el.contract.assumes.push_back(to_expr(node_, a, name));
      for (const auto& g : node_.contract->guarantees)
        el.contract.guarantees.push_back(to_expr(node_, g, name));
    }
    return el;
  }

private:
  const Program& prog_;
  const InstanceTree& tree_;
  const Node& node_;
  Hypergraph graph_;
  std::vector<VarId> states_;
  std::map<std::string, Value> init_;
  int pre_counter_ = 0;
  bool has_first_ = false;

  std::string q(const std::string& v) const { return qualify(tree_.path, v); }

  void add(const Task& t)
  {
    if (graph_.has_edge(t.id)) throw SourceError(node_.span, "duplicate task " + t.id);
    graph_.add_edge(t);
  }

  void define(const std::string& target, Sort sort, const Expr& e)
  {
    add(Task{"t:" + target, reads_of({e}), {VarId{target, sort}}, Relation::functional({e})});
  }

  Expr lower(const LExprPtr& e)
  {
    switch (e->kind) {
    case LExpr::Kind::Pre: {
      Expr inner = lower(e->args[0]);
      const std::string state = q("$pre" + std::to_string(pre_counter_++));
      states_.push_back({state, inner.sort()});
      define(primed(state), inner.sort(), inner);
      return Expr::var(state, inner.sort());
    }
    case LExpr::Kind::Arrow: {
      if (literal_like(e->args[0]) && e->args[1]->kind == LExpr::Kind::Pre) {
        Expr inner = lower(e->args[1]->args[0]);
        const std::string state = q("$pre" + std::to_string(pre_counter_++));
        states_.push_back({state, inner.sort()});
        init_[state] = literal_value(e->args[0]);
        define(primed(state), inner.sort(), inner);
        return Expr::var(state, inner.sort());
      }
      const std::string first = q("$first");
      if (!has_first_) {
        has_first_ = true;
        states_.push_back({first, Sort::Bool});
        init_[first] = Value::boolean(true);
        define(primed(first), Sort::Bool, Expr::boolean(false));
      }
      Expr a = lower(e->args[0]);
      Expr b = lower(e->args[1]);
      return Expr::ite(Expr::var(first, Sort::Bool), a, b);
    }
    case LExpr::Kind::Call:
      throw SourceError(e->span, "node call " + e->name + " nested inside an expression");
    case LExpr::Kind::Literal:
    case LExpr::Kind::Var: return to_expr(node_, e, [&](const std::string& v) { return q(v); });
    case LExpr::Kind::Unary: {
      Expr a = lower(e->args[0]);
      if (e->uop == UnaryOp::Neg && a.kind() == Expr::Kind::Const)
        return Expr::constant(a.sort() == Sort::Int ? Value::integer(-a.value().as_integer())
                                                    : Value::real(-a.value().as_rational()));
      return Expr::unary(e->uop, a);
    }
    case LExpr::Kind::Binary: {
      Expr a = lower(e->args[0]);
      Expr b = lower(e->args[1]);
      return Expr::binary(e->bop, a, b);
    }
    case LExpr::Kind::Ite: {
      Expr c = lower(e->args[0]);
      Expr t = lower(e->args[1]);
      Expr f = lower(e->args[2]);
      return Expr::ite(c, t, f);
    }
    }
    throw SourceError(e->span, "unsupported expression");
  }
};

} // namespace

Elaboration elaborate(const Program& p, const InstanceTree& tree) { return Builder(p, tree).run(); }

Elaboration elaborate_main(const Program& p, const std::string& main)
{
  typecheck(p);
  return elaborate(p, instantiate(p, main));
}

} // namespace hrmv::lustre
