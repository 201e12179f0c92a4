#include "hrmv/mc/transition_system.hpp"

#include <algorithm>
#include <sstream>

namespace hrmv::mc {

std::string frame_symbol(const std::string& v, std::size_t i)
{
  return "|" + v + "@" + std::to_string(i) + "|";
}

std::string frame_smt(const Expr& e, std::size_t i)
{
  return e.to_smt([i](const std::string& v) {
    return is_primed(v) ? frame_symbol(unprimed(v), i + 1) : frame_symbol(v, i);
  });
}

std::string_view query_name(Query q)
{
  switch (q) {
  case Query::Bmc: return "bmc";
  case Query::Base: return "base";
  case Query::Step: return "step";
  }
  return "?";
}

namespace {

void require_linear(const Expr& e, const std::string& where)
{
  if (!e.is_linear()) throw Error("nonlinear arithmetic in " + where + ": " + e.to_string());
}

std::string smt_sort(Sort s)
{
  switch (s) {
  case Sort::Bool: return "Bool";
  case Sort::Int: return "Int";
  case Sort::Real: return "Real";
  case Sort::Unit: break;
  }
  throw Error("unit-sorted variables have no SMT encoding");
}

} // namespace

TransitionSystem encode(const Module& subject, const Contract& c, const std::string& name)
{
  TransitionSystem ts;
  const ValidationReport report = subject.validate();
  for (const auto& issue : report.issues)
    if (issue.condition != "i") throw Error("invalid module " + subject.name + ":\n" + report.to_string());
  ts.cyclic = !report.ok();
  ts.name = name.empty() ? subject.name : name;
  ts.subject = subject;
  ts.states = subject.states;
  ts.inputs = subject.inputs;

  std::map<std::string, Sort> vars;
  for (const auto* list : {&subject.inputs, &subject.outputs, &subject.states})
    for (const auto& v : *list) vars[v.name] = v.sort;
  for (const auto& [v, s] : subject.react.vertices())
    if (!is_primed(v)) vars[v] = s;
  for (const auto& [v, s] : vars)
    if (s != Sort::Unit) ts.frame_vars.push_back({v, s});

  for (const auto& [s, v] : subject.init) ts.init.push_back(equals(Expr::var(s, v.sort()), Expr::constant(v)));

  std::vector<std::string> order;
  if (ts.cyclic)
    for (const auto& [id, t] : subject.react.edges()) order.push_back(id);
  else
    order = subject.react.edge_order();
  for (const auto& id : order) {
    const Task& t = subject.react.edge(id);
    const std::string where = "task " + id;
    switch (t.rel.kind) {
    case Relation::Kind::Functional:
      for (std::size_t j = 0; j < t.writes.size(); ++j) {
        require_linear(t.rel.assigns[j], where);
        if (t.writes[j].sort == Sort::Unit) continue;
        ts.trans.push_back(equals(t.writes[j].expr(), t.rel.assigns[j]));
      }
      break;
    case Relation::Kind::Nondet:
      require_linear(t.rel.predicate, where);
      ts.trans.push_back(t.rel.predicate);
      break;
    case Relation::Kind::Opaque: {
      require_linear(t.rel.assume, where);
      require_linear(t.rel.guarantee, where);
      if (t.rel.hist.empty()) {
        ts.trans.push_back(implies(t.rel.assume, t.rel.guarantee));
      } else {
        Expr h = Expr::var(t.rel.hist, Sort::Bool);
        Expr active = h && t.rel.assume;
        ts.trans.push_back(equals(Expr::var(primed(t.rel.hist), Sort::Bool), active));
        ts.trans.push_back(implies(active, t.rel.guarantee));
      }
      break;
    }
    }
  }

  for (std::size_t j = 0; j < c.assumes.size(); ++j) {
    require_linear(c.assumes[j], "assumption");
    ts.assumes.push_back({"assume[" + std::to_string(j) + "]", c.assumes[j]});
  }
  for (std::size_t j = 0; j < c.guarantees.size(); ++j) {
    require_linear(c.guarantees[j], "guarantee");
    ts.props.push_back({"guarantee[" + std::to_string(j) + "]", c.guarantees[j]});
  }
  for (const auto& f : c.assumes)
    for (const auto& [v, s] : f.typed_vars())
      if (!vars.count(v)) throw Error("assumption mentions unknown variable " + v);
  for (const auto& f : c.guarantees)
    for (const auto& [v, s] : f.typed_vars())
      if (!vars.count(v)) throw Error("guarantee mentions unknown variable " + v);

  for (const auto& s : subject.states) {
    const bool hist = s.name.size() >= 5 && s.name.ends_with(".hist");
    auto it = subject.init.find(s.name);
    if (hist && s.sort == Sort::Bool && it != subject.init.end() && it->second.as_bool())
      ts.lemma_candidates.push_back(s.name);
  }
  return ts;
}

std::string emit_smt(const TransitionSystem& ts, std::size_t k, Query q, const std::vector<std::string>& lemmas)
{
  std::ostringstream out;
  out << "; " << ts.name << " " << query_name(q) << " k=" << k << "\n";
  out << "(set-option :produce-models true)\n";
  out << "(set-logic QF_LIRA)\n";
  for (std::size_t i = 0; i <= k; ++i)
    for (const auto& v : ts.frame_vars)
      out << "(declare-const " << frame_symbol(v.name, i) << " " << smt_sort(v.sort) << ")\n";
  for (const auto& s : ts.states)
    if (s.sort != Sort::Unit) out << "(declare-const " << frame_symbol(s.name, k + 1) << " " << smt_sort(s.sort) << ")\n";

  if (q != Query::Step)
    for (const auto& f : ts.init) out << "(assert " << frame_smt(f, 0) << ")\n";
  for (std::size_t i = 0; i <= k; ++i) {
    for (const auto& f : ts.trans) out << "(assert " << frame_smt(f, i) << ")\n";
    for (const auto& a : ts.assumes) out << "(assert " << frame_smt(a.formula, i) << ")\n";
  }

  std::vector<Expr> goal;
  for (const auto& p : ts.props) goal.push_back(p.formula);
  if (q != Query::Bmc)
    for (const auto& l : lemmas) goal.push_back(Expr::var(l, Sort::Bool));
  const Expr g = conjunction(goal);
  if (q != Query::Bmc)
    for (std::size_t i = 0; i < k; ++i) out << "(assert " << frame_smt(g, i) << ")\n";
  out << "(assert (not " << frame_smt(g, k) << "))\n";
  out << "(check-sat)\n";
  return out.str();
}

} // namespace hrmv::mc
