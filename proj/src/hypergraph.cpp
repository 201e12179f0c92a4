#include "hrmv/hypergraph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "hrmv/solve.hpp"

namespace hrmv {

std::string primed(const std::string& name) { return name + "'"; }
bool is_primed(const std::string& name) { return !name.empty() && name.back() == '\''; }
std::string unprimed(const std::string& name)
{
  return is_primed(name) ? name.substr(0, name.size() - 1) : name;
}

Relation Relation::functional(std::vector<Expr> assigns)
{
  Relation r;
  r.kind = Kind::Functional;
  r.assigns = std::move(assigns);
  return r;
}

Relation Relation::nondet(Expr predicate)
{
  Relation r;
  r.kind = Kind::Nondet;
  r.predicate = std::move(predicate);
  return r;
}

Relation Relation::opaque(std::string label, Expr assume, Expr guarantee, std::string hist)
{
  Relation r;
  r.kind = Kind::Opaque;
  r.label = std::move(label);
  r.assume = std::move(assume);
  r.guarantee = std::move(guarantee);
  r.hist = std::move(hist);
  return r;
}

std::string Relation::describe() const
{
  switch (kind) {
  case Kind::Functional: {
    std::string s = "fn(";
    for (std::size_t i = 0; i < assigns.size(); ++i)
      s += (i ? ", " : "") + assigns[i].to_string();
    return s + ")";
  }
  case Kind::Nondet: return "choose(" + predicate.to_string() + ")";
  case Kind::Opaque:
    return "Hist(" + assume.to_string() + ") => " + guarantee.to_string();
  }
  return "?";
}

bool operator==(const Relation& a, const Relation& b)
{
  if (a.kind != b.kind) return false;
  switch (a.kind) {
  case Relation::Kind::Functional: return a.assigns == b.assigns;
  case Relation::Kind::Nondet: return a.predicate == b.predicate;
  case Relation::Kind::Opaque:
    return a.label == b.label && a.assume == b.assume && a.guarantee == b.guarantee &&
           a.hist == b.hist;
  }
  return false;
}

bool operator==(const Task& a, const Task& b)
{
  return a.id == b.id && a.reads == b.reads && a.writes == b.writes && a.rel == b.rel;
}

bool ValidationReport::has(const std::string& condition) const
{
  return std::any_of(issues.begin(), issues.end(),
                     [&](const Issue& i) { return i.condition == condition; });
}

void ValidationReport::add(std::string condition, std::string message)
{
  issues.push_back({std::move(condition), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other, const std::string& prefix)
{
  for (const auto& i : other.issues) issues.push_back({i.condition, prefix + i.message});
}

std::string ValidationReport::to_string() const
{
  std::ostringstream out;
  for (const auto& i : issues) out << "(" << i.condition << ") " << i.message << "\n";
  return out.str();
}

void Hypergraph::add_vertex(const VarId& v)
{
  auto [it, inserted] = vertices_.emplace(v.name, v.sort);
  if (!inserted && it->second != v.sort)
    throw Error("vertex '" + v.name + "' used with sorts " + std::string(sort_name(it->second)) +
                " and " + std::string(sort_name(v.sort)));
}

void Hypergraph::add_edge(Task t)
{
  if (edges_.count(t.id)) throw Error("duplicate edge id '" + t.id + "'");
  for (const auto& v : t.reads) add_vertex(v);
  for (const auto& v : t.writes) add_vertex(v);
  std::string id = t.id;
  edges_.emplace(std::move(id), std::move(t));
}

void Hypergraph::remove_vertex(const std::string& name) { vertices_.erase(name); }

const Task& Hypergraph::edge(const std::string& id) const
{
  auto it = edges_.find(id);
  if (it == edges_.end()) throw Error("unknown edge '" + id + "'");
  return it->second;
}

Sort Hypergraph::sort_of(const std::string& name) const
{
  auto it = vertices_.find(name);
  if (it == vertices_.end()) throw Error("unknown vertex '" + name + "'");
  return it->second;
}

std::vector<std::string> Hypergraph::writers(const std::string& name) const
{
  std::vector<std::string> out;
  for (const auto& [id, t] : edges_)
    for (const auto& w : t.writes)
      if (w.name == name) {
        out.push_back(id);
        break;
      }
  return out;
}

std::set<std::string> Hypergraph::initial_vertices() const
{
  std::set<std::string> out;
  for (const auto& [name, sort] : vertices_) out.insert(name);
  for (const auto& [id, t] : edges_)
    for (const auto& w : t.writes) out.erase(w.name);
  return out;
}

std::set<std::string> Hypergraph::terminal_vertices() const
{
  std::set<std::string> out;
  for (const auto& [name, sort] : vertices_) out.insert(name);
  for (const auto& [id, t] : edges_)
    for (const auto& r : t.reads) out.erase(r.name);
  return out;
}

namespace {

using Adjacency = std::map<std::string, std::set<std::string>>;

Adjacency successors(const Hypergraph& g)
{
  Adjacency adj;
  for (const auto& [name, sort] : g.vertices()) adj[name];
  for (const auto& [id, t] : g.edges())
    for (const auto& r : t.reads)
      for (const auto& w : t.writes) adj[r.name].insert(w.name);
  return adj;
}

// Iterative three-colour DFS; returns the vertices of one cycle if any.
std::vector<std::string> find_cycle(const Adjacency& adj)
{
  enum Colour { White, Grey, Black };
  std::map<std::string, Colour> colour;
  std::map<std::string, std::string> parent;
  for (const auto& [v, _] : adj) colour[v] = White;
  for (const auto& [root, _] : adj) {
    if (colour[root] != White) continue;
    std::vector<std::pair<std::string, std::set<std::string>::const_iterator>> stack;
    colour[root] = Grey;
    stack.emplace_back(root, adj.at(root).begin());
    while (!stack.empty()) {
      auto& [v, it] = stack.back();
      if (it == adj.at(v).end()) {
        colour[v] = Black;
        stack.pop_back();
        continue;
      }
      const std::string w = *it++;
      if (colour[w] == Grey) {
        std::vector<std::string> cycle{w};
        for (auto r = stack.rbegin(); r != stack.rend() && r->first != w; ++r)
          cycle.push_back(r->first);
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (colour[w] == White) {
        colour[w] = Grey;
        stack.emplace_back(w, adj.at(w).begin());
      }
    }
  }
  return {};
}

} // namespace

std::vector<std::string> Hypergraph::cycle_witness() const { return find_cycle(successors(*this)); }

bool Hypergraph::is_acyclic() const { return cycle_witness().empty(); }

ValidationReport Hypergraph::validate() const
{
  ValidationReport report;

  auto cycle = cycle_witness();
  if (!cycle.empty()) {
    std::string msg = "cycle through";
    for (const auto& v : cycle) msg += " " + v;
    report.add("i", msg);
  }

  std::set<std::string> incident;
  for (const auto& [id, t] : edges_) {
    for (const auto& r : t.reads) incident.insert(r.name);
    for (const auto& w : t.writes) incident.insert(w.name);
  }
  for (const auto& [name, sort] : vertices_)
    if (!incident.count(name)) report.add("ii", "isolated vertex " + name);

  std::map<std::string, std::vector<std::string>> writer_map;
  for (const auto& [id, t] : edges_) {
    std::set<std::string> seen;
    for (const auto& w : t.writes) {
      if (!seen.insert(w.name).second)
        report.add("iii", "edge " + id + " writes " + w.name + " more than once");
      else
        writer_map[w.name].push_back(id);
    }
  }
  for (const auto& [name, ids] : writer_map)
    if (ids.size() > 1) {
      std::string msg = "vertex " + name + " written by";
      for (const auto& id : ids) msg += " " + id;
      report.add("iii", msg);
    }

  for (const auto& [id, t] : edges_) {
    std::set<std::string> reads, writes;
    for (const auto& r : t.reads) {
      if (!reads.insert(r.name).second) report.add("iv", "edge " + id + " reads " + r.name + " twice");
      if (!has_vertex(r.name) || sort_of(r.name) != r.sort)
        report.add("iv", "edge " + id + " reads unregistered vertex " + r.name);
    }
    for (const auto& w : t.writes) {
      writes.insert(w.name);
      if (!has_vertex(w.name) || sort_of(w.name) != w.sort)
        report.add("iv", "edge " + id + " writes unregistered vertex " + w.name);
      if (reads.count(w.name)) report.add("iv", "edge " + id + " reads and writes " + w.name);
    }
    auto check_scope = [&](const Expr& e, const std::set<std::string>& allowed, const char* what) {
      for (const auto& v : e.vars())
        if (!allowed.count(v))
          report.add("iv", "edge " + id + ": " + what + " mentions " + v + " outside its sets");
    };
    std::set<std::string> both = reads;
    both.insert(writes.begin(), writes.end());
    switch (t.rel.kind) {
    case Relation::Kind::Functional:
      if (t.rel.assigns.size() != t.writes.size()) {
        report.add("iv", "edge " + id + " has " + std::to_string(t.rel.assigns.size()) +
                             " expressions for " + std::to_string(t.writes.size()) + " writes");
        break;
      }
      for (std::size_t k = 0; k < t.writes.size(); ++k) {
        if (t.rel.assigns[k].sort() != t.writes[k].sort)
          report.add("iv", "edge " + id + " assigns a value of the wrong sort to " + t.writes[k].name);
        check_scope(t.rel.assigns[k], reads, "expression");
      }
      break;
    case Relation::Kind::Nondet: check_scope(t.rel.predicate, both, "predicate"); break;
    case Relation::Kind::Opaque:
      check_scope(t.rel.assume, reads, "assume");
      check_scope(t.rel.guarantee, both, "guarantee");
      if (!t.rel.hist.empty() && (!reads.count(t.rel.hist) || !writes.count(primed(t.rel.hist))))
        report.add("iv", "edge " + id + " does not read/write its history bit " + t.rel.hist);
      break;
    }
  }
  return report;
}

std::vector<std::set<std::string>> Hypergraph::levels() const
{
  if (!is_acyclic()) throw Error("levels: graph is cyclic");
  std::map<std::string, std::string> writer;
  for (const auto& [id, t] : edges_)
    for (const auto& w : t.writes) writer.emplace(w.name, id);

  std::map<std::string, int> level;
  std::function<int(const std::string&)> compute = [&](const std::string& v) -> int {
    if (auto it = level.find(v); it != level.end()) return it->second;
    int l = 0;
    if (auto w = writer.find(v); w != writer.end()) {
      l = 1;
      for (const auto& r : edges_.at(w->second).reads) l = std::max(l, compute(r.name) + 1);
    }
    level[v] = l;
    return l;
  };
  int top = -1;
  for (const auto& [name, sort] : vertices_) top = std::max(top, compute(name));
  std::vector<std::set<std::string>> out(static_cast<std::size_t>(top + 1));
  for (const auto& [name, l] : level) out[static_cast<std::size_t>(l)].insert(name);
  // Level 0 may be empty when every vertex is written by a read-free task.
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& s) { return s.empty(); }),
            out.end());
  return out;
}

std::vector<std::string> Hypergraph::edge_order() const
{
  auto lv = levels();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < lv.size(); ++i)
    for (const auto& v : lv[i]) index[v] = i;
  std::vector<std::pair<std::size_t, std::string>> keyed;
  for (const auto& [id, t] : edges_) {
    std::size_t k = 0;
    for (const auto& w : t.writes) k = std::max(k, index[w.name]);
    for (const auto& r : t.reads) k = std::max(k, index[r.name] + 1);
    keyed.emplace_back(k, id);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  for (auto& [k, id] : keyed) out.push_back(id);
  return out;
}

bool Hypergraph::await_dep(const std::string& x, const std::string& y) const
{
  if (!has_vertex(x)) throw Error("await_dep: unknown vertex '" + x + "'");
  if (!has_vertex(y)) throw Error("await_dep: unknown vertex '" + y + "'");
  auto adj = successors(*this);
  std::set<std::string> seen;
  std::vector<std::string> todo(adj[x].begin(), adj[x].end());
  while (!todo.empty()) {
    std::string v = todo.back();
    todo.pop_back();
    if (v == y) return true;
    if (!seen.insert(v).second) continue;
    for (const auto& w : adj[v]) todo.push_back(w);
  }
  return false;
}

Hypergraph Hypergraph::subgraph(const std::set<std::string>& edge_ids) const
{
  Hypergraph out;
  for (const auto& id : edge_ids) {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw Error("subgraph: edge '" + id + "' is not in the graph");
    out.add_edge(it->second);
  }
  return out;
}

Hypergraph Hypergraph::abstraction(const Hypergraph& sub, const std::vector<VarId>& iface_reads,
                                   const std::vector<VarId>& iface_writes, const Relation& spec,
                                   const std::string& fresh_id) const
{
  for (const auto& [id, t] : sub.edges()) {
    auto it = edges_.find(id);
    if (it == edges_.end() || !(it->second == t))
      throw Error("abstraction: edge '" + id + "' of the subgraph is not in the graph");
  }
  const auto sub_initial = sub.initial_vertices();
  for (const auto& r : iface_reads)
    if (sub.has_vertex(r.name) && !sub_initial.count(r.name))
      throw Error("abstraction: interface read " + r.name + " is written inside the subgraph");
  for (const auto& w : iface_writes)
    if (sub.has_vertex(w.name) && sub_initial.count(w.name))
      throw Error("abstraction: interface write " + w.name + " is initial in the subgraph");

  Hypergraph out;
  for (const auto& [name, sort] : vertices_)
    if (!sub.has_vertex(name)) out.add_vertex({name, sort});
  for (const auto& [id, t] : edges_)
    if (!sub.has_edge(id)) out.add_edge(t);
  out.add_edge(Task{fresh_id, iface_reads, iface_writes, spec});
  return out;
}

namespace {

std::string dot_quote(const std::string& s)
{
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

} // namespace

std::string Hypergraph::to_dot(const std::string& name,
                               const std::map<std::string, std::set<std::string>>& clusters) const
{
  std::ostringstream out;
  out << "digraph " << dot_quote(name) << " {\n";
  if (empty()) {
    out << "}\n";
    return out.str();
  }
  out << "  rankdir=LR;\n";
  for (const auto& [v, sort] : vertices_)
    out << "  " << dot_quote(v) << " [shape=point, xlabel=" << dot_quote(v) << "];\n";

  std::map<std::string, std::size_t> number;
  std::size_t n = 0;
  for (const auto& [id, t] : edges_) number[id] = ++n;
  auto junction = [&](const std::string& id) { return dot_quote("e:" + id); };
  auto emit_junction = [&](const std::string& id, const char* indent) {
    out << indent << junction(id) << " [shape=circle, width=0.3, label=\"" << number[id]
        << "\", tooltip=" << dot_quote(id) << "];\n";
  };

  std::set<std::string> clustered;
  std::size_t k = 0;
  for (const auto& [label, ids] : clusters) {
    out << "  subgraph cluster_" << k++ << " {\n    style=dashed;\n    label=" << dot_quote(label)
        << ";\n";
    for (const auto& id : ids)
      if (edges_.count(id) && clustered.insert(id).second) emit_junction(id, "    ");
    out << "  }\n";
  }
  for (const auto& [id, t] : edges_)
    if (!clustered.count(id)) emit_junction(id, "  ");
  for (const auto& [id, t] : edges_) {
    for (const auto& r : t.reads) out << "  " << dot_quote(r.name) << " -> " << junction(id) << ";\n";
    for (const auto& w : t.writes) out << "  " << junction(id) << " -> " << dot_quote(w.name) << ";\n";
  }
  out << "}\n";
  return out.str();
}

bool operator==(const Hypergraph& a, const Hypergraph& b)
{
  return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
}

UnionResult graph_union(const Hypergraph& g1, const Hypergraph& g2)
{
  UnionResult r;
  r.graph = g1;
  std::map<std::string, std::string> writer1;
  for (const auto& [id, t] : g1.edges())
    for (const auto& w : t.writes) writer1[w.name] = id;
  for (const auto& [name, sort] : g2.vertices()) r.graph.add_vertex({name, sort});
  for (const auto& [id, t] : g2.edges()) {
    if (g1.has_edge(id)) {
      if (!(g1.edge(id) == t)) r.edge_conflicts.push_back(id);
      continue;
    }
    bool conflict = false;
    for (const auto& w : t.writes)
      if (writer1.count(w.name)) {
        r.write_conflicts.push_back(w.name);
        conflict = true;
      }
    if (!conflict) r.graph.add_edge(t);
  }
  r.acyclic = r.graph.is_acyclic();
  return r;
}

bool bool_tg_total(const Hypergraph& g)
{
  for (const auto& [name, sort] : g.vertices())
    if (sort != Sort::Bool) throw Error("bool_tg_total: vertex " + name + " is not bool");
  const auto init_set = g.initial_vertices();
  std::vector<std::string> initial(init_set.begin(), init_set.end());
  if (initial.size() > 20) throw Error("bool_tg_total: too many initial vertices");
  SolveOptions opts;
  opts.domain = [](const std::string&, Sort) {
    return std::vector<Value>{Value::boolean(false), Value::boolean(true)};
  };
  const std::size_t count = std::size_t{1} << initial.size();
  for (std::size_t bits = 0; bits < count; ++bits) {
    Valuation seed;
    for (std::size_t i = 0; i < initial.size(); ++i)
      seed[initial[i]] = Value::boolean(((bits >> i) & 1U) != 0);
    bool found = false;
    solve_graph(g, seed, opts, [&](const Valuation&) {
      found = true;
      return false;
    });
    if (!found) return false;
  }
  return true;
}

} // namespace hrmv
