#include "hrmv/hierarchy.hpp"

#include <algorithm>

namespace hrmv {

std::set<std::string> Contract::vars() const
{
  std::set<std::string> out;
  for (const auto* list : {&assumes, &guarantees})
    for (const auto& e : *list) {
      auto v = e.vars();
      out.insert(v.begin(), v.end());
    }
  return out;
}

GoalModules goal_modules(const Module& subject, const Contract& c, const std::string& label)
{
  GoalModules g;
  g.lhs = subject;
  if (!c.assumes.empty()) {
    std::vector<VarId> outs;
    for (const auto& [v, sort] : c.assume_formula().typed_vars())
      if (subject.is_input(v)) outs.push_back({v, sort});
    g.lhs = parallel_compose(subject, property_module(PropertyFormula::always(c.assume_formula()),
                                                      outs, label + ".assume"));
  }
  std::vector<VarId> outs;
  for (const auto& [v, sort] : c.guarantee_formula().typed_vars())
    if (g.lhs.is_output(v)) outs.push_back({v, sort});
  g.rhs = property_module(PropertyFormula::always(c.guarantee_formula()), outs, label + ".guarantee");
  return g;
}

namespace {

template <class F>
void pairwise(const std::vector<VarId>& a, const std::vector<VarId>& b, F f)
{
  for (const auto& x : a)
    for (const auto& y : b)
      if (x.name == y.name) f(x.name);
}

} // namespace

ValidationReport validate_hierarchy(const HierarchicalModule& h)
{
  ValidationReport r;
  const Module& m = h.module;
  r.merge(m.validate(), m.name + ": ");
  for (std::size_t j = 0; j < h.bindings.size(); ++j) {
    const auto& b = h.bindings[j];
    const Module& c = b.module();
    const std::string who = "child " + b.instance + ": ";
    r.merge(validate_hierarchy(b.child), who);
    pairwise(m.inputs, c.inputs, [&](const std::string& v) { r.add("i", who + "shares input " + v); });
    pairwise(m.outputs, c.outputs, [&](const std::string& v) { r.add("i", who + "shares output " + v); });
    for (const auto& s : c.states)
      if (!m.is_state(s.name)) r.add("ii", who + "state " + s.name + " is not a parent state");
    for (const auto& s : c.states) {
      auto pi = m.init.find(s.name);
      auto ci = c.init.find(s.name);
      const bool same = (pi == m.init.end() && ci == c.init.end()) ||
                        (pi != m.init.end() && ci != c.init.end() && pi->second == ci->second);
      if (!same) r.add("iii", who + "initial condition of " + s.name + " differs from the parent's");
    }
    bool edges_ok = true;
    for (const auto& id : b.edge_ids)
      if (!m.react.has_edge(id)) {
        r.add("iv", who + "edge " + id + " is not in the parent");
        edges_ok = false;
      }
    if (edges_ok && !(m.react.subgraph(b.edge_ids) == c.react))
      r.add("iv", who + "React is not the parent subgraph on its edges");

    for (std::size_t k = j + 1; k < h.bindings.size(); ++k) {
      const auto& other = h.bindings[k];
      const std::string pair = b.instance + "/" + other.instance + ": ";
      pairwise(c.outputs, other.module().outputs,
               [&](const std::string& v) { r.add("disjoint", pair + "shared output " + v); });
      pairwise(c.states, other.module().states,
               [&](const std::string& v) { r.add("disjoint", pair + "shared state " + v); });
      for (const auto& id : b.edge_ids)
        if (other.edge_ids.count(id)) r.add("disjoint", pair + "shared edge " + id);
    }
  }
  return r;
}

Module flatten(const HierarchicalModule& h)
{
  auto r = validate_hierarchy(h);
  if (!r.ok()) throw Error("invalid hierarchy " + h.module.name + ":\n" + r.to_string());
  return h.module;
}

Module derive_adapter(const HierarchicalModule& h)
{
  const Module& m = flatten(h);
  if (h.bindings.empty()) return m;
  std::set<std::string> removed_edges, child_states;
  Module a;
  a.name = m.name + ".adapter";
  a.inputs = m.inputs;
  a.outputs = m.outputs;
  for (const auto& b : h.bindings) {
    removed_edges.insert(b.edge_ids.begin(), b.edge_ids.end());
    for (const auto& s : b.module().states) child_states.insert(s.name);
    a.inputs.insert(a.inputs.end(), b.module().outputs.begin(), b.module().outputs.end());
    a.outputs.insert(a.outputs.end(), b.module().inputs.begin(), b.module().inputs.end());
  }
  std::sort(a.inputs.begin(), a.inputs.end());
  std::sort(a.outputs.begin(), a.outputs.end());
  for (const auto& s : m.states)
    if (!child_states.count(s.name)) a.states.push_back(s);
  for (const auto& [s, v] : m.init)
    if (!child_states.count(s)) a.init.emplace(s, v);
  for (const auto& [id, t] : m.react.edges())
    if (!removed_edges.count(id)) a.react.add_edge(t);
  return a;
}

Decomposition decompose(const HierarchicalModule& h)
{
  Decomposition d;
  d.adapter = derive_adapter(h);
  for (const auto& b : h.bindings) {
    d.children.push_back(b.module());
    for (const auto& v : b.module().inputs) d.hide_set.insert(v.name);
    for (const auto& v : b.module().outputs) d.hide_set.insert(v.name);
  }
  return d;
}

Module recompose(const Decomposition& d)
{
  std::vector<Module> parts = d.children;
  parts.push_back(d.adapter);
  Module all = compose_all(parts);
  Module out = hide(all, d.hide_set);
  out.name = d.adapter.name + ".recomposed";
  return out;
}

Module abstract_submodules(const HierarchicalModule& h, const std::map<std::string, Contract>& contracts)
{
  const Module& m = flatten(h);
  Module out = m;
  out.name = m.name + ".abstract";
  for (const auto& [instance, c] : contracts)
    if (std::none_of(h.bindings.begin(), h.bindings.end(),
                     [&](const SubmoduleBinding& b) { return b.instance == instance; }))
      throw Error("abstract: no child instance named " + instance);

  for (const auto& b : h.bindings) {
    auto it = contracts.find(b.instance);
    if (it == contracts.end()) continue;
    const Module& c = b.module();
    const Contract& k = it->second;
    for (const auto& v : k.assume_formula().vars())
      if (!c.is_input(v)) throw Error("abstract: assume of " + b.instance + " mentions non-input " + v);
    for (const auto& v : k.guarantee_formula().vars())
      if (!c.is_input(v) && !c.is_output(v))
        throw Error("abstract: guarantee of " + b.instance + " mentions " + v);

    const std::string hist = b.instance + ".hist";
    std::vector<VarId> reads = c.inputs;
    reads.push_back({hist, Sort::Bool});
    std::vector<VarId> writes = c.outputs;
    writes.push_back({primed(hist), Sort::Bool});
    out.react = out.react.abstraction(
        c.react, reads, writes,
        Relation::opaque(b.instance, k.assume_formula(), k.guarantee_formula(), hist),
        "abs:" + b.instance);

    std::vector<VarId> states;
    for (const auto& s : out.states)
      if (!c.is_state(s.name)) states.push_back(s);
    states.push_back({hist, Sort::Bool});
    std::sort(states.begin(), states.end());
    out.states = std::move(states);
    for (const auto& s : c.states) out.init.erase(s.name);
    out.init[hist] = Value::boolean(true);
  }
  return out;
}

Module abstract_submodule(const HierarchicalModule& h, std::size_t j, const Contract& c)
{
  if (j >= h.bindings.size()) throw Error("abstract: child index out of range");
  return abstract_submodules(h, {{h.bindings[j].instance, c}});
}

std::vector<Obligation> gen_obligations(const HierarchicalModule& h, const Contract& top,
                                        const std::vector<Contract>& subs)
{
  if (subs.size() != h.bindings.size())
    throw Error("gen_obligations: expected " + std::to_string(h.bindings.size()) + " sub-contracts");
  std::vector<Obligation> out;
  Contract adapter = top;
  for (std::size_t j = 0; j < h.bindings.size(); ++j) {
    out.push_back({"sub:" + h.bindings[j].instance, h.bindings[j].module(), subs[j]});
    adapter.assumes.insert(adapter.assumes.end(), subs[j].guarantees.begin(), subs[j].guarantees.end());
    adapter.guarantees.insert(adapter.guarantees.end(), subs[j].assumes.begin(), subs[j].assumes.end());
  }
  out.push_back({h.bindings.empty() ? "goal" : "adapter", derive_adapter(h), adapter});
  return out;
}

std::map<std::string, std::set<std::string>> binding_clusters(const HierarchicalModule& h)
{
  std::map<std::string, std::set<std::string>> out;
  for (const auto& b : h.bindings) out[b.instance] = b.edge_ids;
  return out;
}

} // namespace hrmv
