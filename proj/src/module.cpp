#include "hrmv/module.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "hrmv/solve.hpp"

namespace hrmv {

namespace {

std::set<std::string> names_of(const std::vector<VarId>& vs)
{
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(v.name);
  return out;
}

void sort_vars(std::vector<VarId>& vs)
{
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

bool contains(const std::vector<VarId>& vs, const std::string& name)
{
  return std::any_of(vs.begin(), vs.end(), [&](const VarId& v) { return v.name == name; });
}

} // namespace

std::set<std::string> Module::input_names() const { return names_of(inputs); }
std::set<std::string> Module::output_names() const { return names_of(outputs); }
std::set<std::string> Module::state_names() const { return names_of(states); }
bool Module::is_input(const std::string& v) const { return contains(inputs, v); }
bool Module::is_output(const std::string& v) const { return contains(outputs, v); }
bool Module::is_state(const std::string& v) const { return contains(states, v); }

std::set<std::string> Module::local_names() const
{
  std::set<std::string> out;
  for (const auto& [v, sort] : react.vertices()) {
    if (is_input(v) || is_output(v) || is_state(v)) continue;
    if (is_primed(v) && is_state(unprimed(v))) continue;
    out.insert(v);
  }
  return out;
}

ValidationReport Module::validate() const
{
  ValidationReport r;
  std::map<std::string, std::string> role;
  auto claim = [&](const std::vector<VarId>& vs, const char* what) {
    for (const auto& v : vs) {
      auto [it, fresh] = role.emplace(v.name, what);
      if (!fresh) r.add("module", v.name + " is both " + it->second + " and " + what);
      if (react.has_vertex(v.name) && react.sort_of(v.name) != v.sort)
        r.add("module", v.name + " has a different sort in React");
    }
  };
  claim(inputs, "input");
  claim(outputs, "output");
  claim(states, "state");

  const auto initial = react.initial_vertices();
  const auto terminal = react.terminal_vertices();
  for (const auto& v : initial)
    if (!is_input(v) && !is_state(v)) r.add("module", "initial vertex " + v + " is not an input or state");
  for (const auto& s : states) {
    if (!react.has_vertex(primed(s.name)) || react.writers(primed(s.name)).empty())
      r.add("module", "state " + s.name + " has no next-state task");
    else if (!terminal.count(primed(s.name)))
      r.add("module", "primed state " + primed(s.name) + " is read inside React");
    else if (react.sort_of(primed(s.name)) != s.sort)
      r.add("module", "primed state " + primed(s.name) + " has a different sort");
  }
  for (const auto& o : outputs)
    if (!react.has_vertex(o.name) || react.writers(o.name).empty())
      r.add("module", "output " + o.name + " is never written");
  for (const auto& [v, sort] : react.vertices())
    if (is_primed(v) && !is_state(unprimed(v))) r.add("module", "primed vertex " + v + " is not a state");
  for (const auto& [s, value] : init) {
    if (!is_state(s))
      r.add("module", "init constrains non-state " + s);
    else if (value.sort() != std::find_if(states.begin(), states.end(), [&](const VarId& v) { return v.name == s; })->sort)
      r.add("module", "init value of " + s + " has the wrong sort");
  }
  r.merge(react.validate());
  return r;
}

void Module::check() const
{
  auto r = validate();
  if (!r.ok()) throw Error("invalid module " + name + ":\n" + r.to_string());
}

Module top_module()
{
  Module m;
  m.name = "top";
  return m;
}

PropertyFormula PropertyFormula::always(Expr p)
{
  if (p.sort() != Sort::Bool) throw Error("property formula is not boolean: " + p.to_string());
  PropertyFormula f;
  f.kind = Kind::Always;
  f.p = std::move(p);
  return f;
}

PropertyFormula PropertyFormula::hist_implies(Expr p, Expr q)
{
  if (p.sort() != Sort::Bool || q.sort() != Sort::Bool)
    throw Error("property formula is not boolean");
  PropertyFormula f;
  f.kind = Kind::HistImplies;
  f.p = std::move(p);
  f.q = std::move(q);
  return f;
}

std::set<std::string> PropertyFormula::vars() const
{
  auto v = p.vars();
  if (kind == Kind::HistImplies) {
    auto w = q.vars();
    v.insert(w.begin(), w.end());
  }
  return v;
}

std::string PropertyFormula::to_string() const
{
  if (kind == Kind::Always) return "always (" + p.to_string() + ")";
  return "Hist (" + p.to_string() + ") => (" + q.to_string() + ")";
}

Module property_module(const PropertyFormula& f, const std::vector<VarId>& outputs,
                       const std::string& label)
{
  std::map<std::string, Sort> typed = f.p.typed_vars();
  if (f.kind == PropertyFormula::Kind::HistImplies) typed.merge(f.q.typed_vars());
  for (const auto& o : outputs) {
    auto it = typed.find(o.name);
    if (it != typed.end() && it->second != o.sort)
      throw Error("property output " + o.name + " has the wrong sort");
  }
  Module m;
  m.name = label;
  m.outputs = outputs;
  sort_vars(m.outputs);
  for (const auto& [v, sort] : typed)
    if (!contains(m.outputs, v)) m.inputs.push_back({v, sort});

  std::vector<VarId> reads = m.inputs;
  if (f.kind == PropertyFormula::Kind::Always) {
    if (m.outputs.empty() && m.inputs.empty() && f.p.is_true()) return m;
    m.react.add_edge(Task{"p:" + label, reads, m.outputs, Relation::nondet(f.p)});
  } else {
    const std::string h = label + ".hist";
    m.states.push_back({h, Sort::Bool});
    m.init[h] = Value::boolean(true);
    reads.push_back({h, Sort::Bool});
    std::vector<VarId> writes = m.outputs;
    writes.push_back({primed(h), Sort::Bool});
    m.react.add_edge(Task{"p:" + label, reads, writes, Relation::opaque(label, f.p, f.q, h)});
  }
  for (const auto& v : m.inputs) m.react.add_vertex(v);
  return m;
}

Module parallel_compose(const Module& m1, const Module& m2)
{
  using K = CompositionError::Kind;
  std::vector<std::string> clash;
  for (const auto& o : m1.outputs)
    if (m2.is_output(o.name)) clash.push_back(o.name);
  if (!clash.empty()) {
    std::string msg = "incompatible outputs:";
    for (const auto& c : clash) msg += " " + c;
    throw CompositionError(K::Outputs, msg);
  }
  for (const auto& s : m1.states)
    if (m2.is_state(s.name)) clash.push_back(s.name);
  if (!clash.empty()) {
    std::string msg = "incompatible states:";
    for (const auto& c : clash) msg += " " + c;
    throw CompositionError(K::States, msg);
  }

  auto u = graph_union(m1.react, m2.react);
  if (!u.write_conflicts.empty() || !u.edge_conflicts.empty()) {
    std::string msg = "write conflict:";
    for (const auto& c : u.write_conflicts) msg += " " + c;
    for (const auto& c : u.edge_conflicts) msg += " edge " + c;
    throw CompositionError(K::WriteConflict, msg);
  }
  if (!u.acyclic) {
    std::string msg = "cyclic composition through";
    for (const auto& v : u.graph.cycle_witness()) msg += " " + v;
    throw CompositionError(K::Cycle, msg);
  }

  Module m;
  m.name = m1.name + "||" + m2.name;
  m.outputs = m1.outputs;
  m.outputs.insert(m.outputs.end(), m2.outputs.begin(), m2.outputs.end());
  sort_vars(m.outputs);
  for (const auto* src : {&m1, &m2})
    for (const auto& i : src->inputs)
      if (!contains(m.outputs, i.name)) m.inputs.push_back(i);
  sort_vars(m.inputs);
  m.states = m1.states;
  m.states.insert(m.states.end(), m2.states.begin(), m2.states.end());
  sort_vars(m.states);
  m.init = m1.init;
  m.init.insert(m2.init.begin(), m2.init.end());
  m.react = std::move(u.graph);
  return m;
}

Module compose_all(const std::vector<Module>& ms)
{
  Module acc = top_module();
  bool first = true;
  for (const auto& m : ms) {
    acc = first ? m : parallel_compose(acc, m);
    first = false;
  }
  return acc;
}

Module hide(const Module& m, const std::set<std::string>& hidden)
{
  for (const auto& h : hidden)
    if (!m.is_output(h)) throw Error("hide: " + h + " is not an output of " + m.name);
  Module out = m;
  out.outputs.clear();
  for (const auto& o : m.outputs)
    if (!hidden.count(o.name)) out.outputs.push_back(o);
  return out;
}

std::vector<Value> DomainBounds::values(const std::string& name, Sort sort) const
{
  switch (sort) {
  case Sort::Unit: return {Value::unit()};
  case Sort::Bool: return {Value::boolean(false), Value::boolean(true)};
  case Sort::Int: {
    std::vector<Value> out;
    for (long z = int_min; z <= int_max; ++z) out.push_back(Value::integer(z));
    return out;
  }
  case Sort::Real: {
    if (real_samples.empty())
      throw Error("unbounded nondeterminism: real variable " + name + " has no sample set");
    std::vector<Value> out;
    for (const auto& q : real_samples) out.push_back(Value::real(q));
    return out;
  }
  }
  return {};
}

std::string trace_to_string(const Trace& t)
{
  std::ostringstream out;
  for (const auto& round : t) {
    Valuation all = round.inputs;
    all.insert(round.outputs.begin(), round.outputs.end());
    out << valuation_to_string(all) << "\n";
  }
  return out.str();
}

namespace {

SolveOptions solve_options(const DomainBounds& bounds)
{
  SolveOptions o;
  o.domain = [&bounds](const std::string& n, Sort s) { return bounds.values(n, s); };
  if (bounds.clamp_ints)
    o.admissible = [&bounds](const std::string&, const Value& v) {
      if (v.sort() != Sort::Int) return true;
      const auto& q = v.as_rational();
      return q >= bounds.int_min && q <= bounds.int_max;
    };
  return o;
}

std::vector<Valuation> product(const std::vector<VarId>& vars,
                               const std::map<std::string, Value>& fixed,
                               const DomainBounds& bounds)
{
  std::vector<Valuation> out{Valuation{}};
  for (const auto& v : vars) {
    std::vector<Value> choices;
    if (auto it = fixed.find(v.name); it != fixed.end())
      choices = {it->second};
    else
      choices = bounds.values(v.name, v.sort);
    std::vector<Valuation> next;
    for (const auto& partial : out)
      for (const auto& c : choices) {
        Valuation x = partial;
        x[v.name] = c;
        next.push_back(std::move(x));
      }
    out = std::move(next);
    if (out.size() > bounds.max_nodes) throw Error("domain product exceeds the explosion guard");
  }
  return out;
}

} // namespace

std::vector<Valuation> initial_states(const Module& m, const DomainBounds& bounds)
{
  return product(m.states, m.init, bounds);
}

std::vector<Valuation> input_valuations(const Module& m, const DomainBounds& bounds)
{
  return product(m.inputs, {}, bounds);
}

std::vector<StepResult> step(const Module& m, const Valuation& s, const Valuation& i,
                             const DomainBounds& bounds, const Valuation& fixed)
{
  Valuation seed = s;
  seed.insert(i.begin(), i.end());
  seed.insert(fixed.begin(), fixed.end());
  std::set<StepResult> out;
  solve_graph(m.react, seed, solve_options(bounds), [&](const Valuation& v) {
    StepResult r;
    for (const auto& o : m.outputs) r.outputs[o.name] = v.at(o.name);
    for (const auto& st : m.states) r.next[st.name] = v.at(primed(st.name));
    out.insert(std::move(r));
    return true;
  });
  return {out.begin(), out.end()};
}

std::set<Trace> traces(const Module& m, std::size_t depth, const DomainBounds& bounds)
{
  std::set<Trace> out;
  const auto inputs = input_valuations(m, bounds);
  std::size_t nodes = 0;
  Trace prefix;
  std::function<void(const Valuation&, std::size_t)> dfs = [&](const Valuation& s, std::size_t d) {
    if (++nodes > bounds.max_nodes) throw Error("trace enumeration exceeds the explosion guard");
    if (d == depth) {
      out.insert(prefix);
      return;
    }
    for (const auto& i : inputs)
      for (const auto& r : step(m, s, i, bounds)) {
        prefix.push_back({i, r.outputs});
        dfs(r.next, d + 1);
        prefix.pop_back();
      }
  };
  for (const auto& s0 : initial_states(m, bounds)) dfs(s0, 0);
  return out;
}

Run simulate(const Module& m, const std::vector<Valuation>& inputs, const DomainBounds& bounds)
{
  auto inits = initial_states(m, bounds);
  if (inits.size() != 1) throw Error("simulate: initial state is not unique");
  Run run;
  run.states.push_back(inits.front());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    Valuation i;
    for (const auto& v : m.inputs) {
      auto it = inputs[k].find(v.name);
      if (it == inputs[k].end())
        throw Error("simulate: round " + std::to_string(k) + " lacks input " + v.name);
      if (it->second.sort() != v.sort)
        throw Error("simulate: input " + v.name + " has the wrong sort");
      i[v.name] = it->second;
    }
    auto rs = step(m, run.states.back(), i, bounds);
    if (rs.empty()) throw Error("simulate: no reaction in round " + std::to_string(k));
    if (rs.size() > 1) throw Error("simulate: nondeterministic reaction in round " + std::to_string(k));
    run.trace.push_back({i, rs.front().outputs});
    run.states.push_back(rs.front().next);
  }
  return run;
}

ValidationReport check_static_impl(const Module& m1, const Module& m2)
{
  ValidationReport r;
  for (const auto& o : m2.outputs)
    if (!m1.is_output(o.name)) r.add("i", "output " + o.name + " of the specification is not an output");
  for (const auto& i : m2.inputs)
    if (!m1.is_input(i.name) && !m1.is_output(i.name))
      r.add("ii", "input " + i.name + " of the specification is not an input or output");
  std::vector<std::string> sources;
  for (const auto& v : m2.inputs) sources.push_back(v.name);
  for (const auto& v : m2.outputs) sources.push_back(v.name);
  for (const auto& out : m2.outputs)
    for (const auto& x : sources) {
      const std::string& y = out.name;
      if (x == y || !m2.react.has_vertex(x) || !m2.react.has_vertex(y)) continue;
      if (!m2.react.await_dep(x, y)) continue;
      bool kept = m1.react.has_vertex(x) && m1.react.has_vertex(y) && m1.react.await_dep(x, y);
      if (!kept) r.add("iii", "dependency of " + y + " on " + x + " is not preserved");
    }
  return r;
}

std::optional<Trace> find_refinement_violation(const Module& m1, const Module& m2,
                                               std::size_t depth, const DomainBounds& bounds)
{
  DomainBounds spec_bounds = bounds;
  spec_bounds.clamp_ints = false;
  const auto inputs1 = input_valuations(m1, bounds);
  const auto inits2 = initial_states(m2, spec_bounds);
  using Config = std::tuple<std::size_t, Valuation, std::set<Valuation>>;
  std::set<Config> cleared;
  std::size_t nodes = 0;
  Trace prefix;
  std::optional<Trace> witness;

  std::function<bool(const Valuation&, const std::set<Valuation>&, std::size_t)> dfs =
      [&](const Valuation& s1, const std::set<Valuation>& s2s, std::size_t d) -> bool {
    if (d == depth) return true;
    Config key{d, s1, s2s};
    if (cleared.count(key)) return true;
    if (++nodes > bounds.max_nodes) throw Error("refinement check exceeds the explosion guard");
    for (const auto& i1 : inputs1)
      for (const auto& r1 : step(m1, s1, i1, bounds)) {
        Valuation seen = i1;
        seen.insert(r1.outputs.begin(), r1.outputs.end());
        Valuation i2, o2;
        for (const auto& [k, v] : seen) {
          if (m2.is_input(k)) i2[k] = v;
          if (m2.is_output(k)) o2[k] = v;
        }
        std::set<Valuation> next2;
        for (const auto& s2 : s2s)
          for (const auto& r2 : step(m2, s2, i2, spec_bounds, o2)) next2.insert(r2.next);
        prefix.push_back({i1, r1.outputs});
        if (next2.empty()) {
          witness = prefix;
          return false;
        }
        if (!dfs(r1.next, next2, d + 1)) return false;
        prefix.pop_back();
      }
    cleared.insert(std::move(key));
    return true;
  };
  const std::set<Valuation> start2(inits2.begin(), inits2.end());
  for (const auto& s1 : initial_states(m1, bounds))
    if (!dfs(s1, start2, 0)) return witness;
  return std::nullopt;
}

bool bounded_refines(const Module& m1, const Module& m2, std::size_t depth,
                     const DomainBounds& bounds)
{
  return !find_refinement_violation(m1, m2, depth, bounds).has_value();
}

bool bounded_equivalent(const Module& m1, const Module& m2, std::size_t depth,
                        const DomainBounds& bounds)
{
  if (m1.input_names() != m2.input_names() || m1.output_names() != m2.output_names()) return false;
  return traces(m1, depth, bounds) == traces(m2, depth, bounds);
}

} // namespace hrmv
