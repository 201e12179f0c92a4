#include "hrmv/solve.hpp"

namespace hrmv {

namespace {

struct Solver {
  const Hypergraph& g;
  const SolveOptions& opts;
  const std::function<bool(const Valuation&)>& visit;
  std::vector<const Task*> order;
  Valuation val;

  bool admissible(const std::string& name, const Value& v) const
  {
    return !opts.admissible || opts.admissible(name, v);
  }

  // Binds `name` to `v` unless already bound; returns false on a clash or
  // a vetoed value. `bound` records fresh bindings for undo.
  bool bind(const std::string& name, const Value& v, std::vector<std::string>& bound)
  {
    auto it = val.find(name);
    if (it != val.end()) return it->second == v;
    if (!admissible(name, v)) return false;
    val.emplace(name, v);
    bound.push_back(name);
    return true;
  }

  void undo(const std::vector<std::string>& bound)
  {
    for (const auto& n : bound) val.erase(n);
  }

  // Enumerates values for `free` writes, then calls `check` on each full
  // assignment and recurses into the next edge when it holds.
  bool choose(const std::vector<VarId>& free, std::size_t k, std::size_t edge,
              const std::function<bool()>& check)
  {
    if (k == free.size()) return check() ? go(edge + 1) : true;
    if (!opts.domain) throw Error("no value domain available for nondeterministic " + free[k].name);
    for (const auto& v : opts.domain(free[k].name, free[k].sort)) {
      if (!admissible(free[k].name, v)) continue;
      val[free[k].name] = v;
      bool cont = choose(free, k + 1, edge, check);
      val.erase(free[k].name);
      if (!cont) return false;
    }
    return true;
  }

  bool go(std::size_t edge)
  {
    if (edge == order.size()) return visit(val);
    const Task& t = *order[edge];
    switch (t.rel.kind) {
    case Relation::Kind::Functional: {
      std::vector<std::string> bound;
      bool ok = true;
      for (std::size_t k = 0; k < t.writes.size() && ok; ++k)
        ok = bind(t.writes[k].name, t.rel.assigns[k].eval(val), bound);
      bool cont = ok ? go(edge + 1) : true;
      undo(bound);
      return cont;
    }
    case Relation::Kind::Nondet: {
      std::vector<VarId> free;
      for (const auto& w : t.writes)
        if (!val.count(w.name)) free.push_back(w);
      return choose(free, 0, edge, [&] { return t.rel.predicate.eval(val).as_bool(); });
    }
    case Relation::Kind::Opaque: {
      const bool h = t.rel.hist.empty() || val.at(t.rel.hist).as_bool();
      const bool active = h && t.rel.assume.eval(val).as_bool();
      std::vector<std::string> bound;
      if (!t.rel.hist.empty() && !bind(primed(t.rel.hist), Value::boolean(active), bound)) {
        undo(bound);
        return true;
      }
      std::vector<VarId> free;
      for (const auto& w : t.writes)
        if (!val.count(w.name)) free.push_back(w);
      bool cont = choose(free, 0, edge,
                         [&] { return !active || t.rel.guarantee.eval(val).as_bool(); });
      undo(bound);
      return cont;
    }
    }
    return true;
  }
};

} // namespace

bool solve_graph(const Hypergraph& g, const Valuation& seed, const SolveOptions& opts,
                 const std::function<bool(const Valuation&)>& visit)
{
  for (const auto& v : g.initial_vertices())
    if (!seed.count(v)) throw Error("solve: initial vertex '" + v + "' is unbound");
  Solver s{g, opts, visit, {}, seed};
  for (const auto& id : g.edge_order()) s.order.push_back(&g.edge(id));
  return s.go(0);
}

} // namespace hrmv
