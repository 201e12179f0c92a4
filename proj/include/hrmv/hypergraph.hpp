#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hrmv/expr.hpp"

namespace hrmv {

/// A typed variable. Identity is the (instance-qualified) name.
struct VarId {
  std::string name;
  Sort sort = Sort::Bool;

  Expr expr() const { return Expr::var(name, sort); }
  friend bool operator==(const VarId& a, const VarId& b) { return a.name == b.name && a.sort == b.sort; }
  friend bool operator<(const VarId& a, const VarId& b) { return a.name < b.name; }
};

/// Primed copy of a state variable name, `s` -> `s'`.
std::string primed(const std::string& name);
bool is_primed(const std::string& name);
std::string unprimed(const std::string& name);

/// Payload of a hyperedge.
struct Relation {
  enum class Kind { Functional, Nondet, Opaque };
  Kind kind = Kind::Functional;

  /// Functional: one expression per write variable, aligned with Task::writes.
  std::vector<Expr> assigns;
  /// Nondet: predicate over reads and writes.
  Expr predicate;
  /// Opaque: Hist(assume) => guarantee. `hist` names the history state
  /// variable (read as `hist`, written as `hist'`); empty when the edge is a
  /// bare interface edge without history.
  std::string label;
  Expr assume;
  Expr guarantee;
  std::string hist;

  static Relation functional(std::vector<Expr> assigns);
  static Relation nondet(Expr predicate);
  static Relation opaque(std::string label, Expr assume, Expr guarantee, std::string hist);

  std::string describe() const;
  friend bool operator==(const Relation& a, const Relation& b);
};

struct Task {
  std::string id;
  std::vector<VarId> reads;
  std::vector<VarId> writes;
  Relation rel;

  friend bool operator==(const Task& a, const Task& b);
};

struct Issue {
  std::string condition;  // e.g. "i", "iii", "compat-outputs"
  std::string message;
};

/// Ordered list of violated conditions; empty means valid.
struct ValidationReport {
  std::vector<Issue> issues;

  bool ok() const { return issues.empty(); }
  bool has(const std::string& condition) const;
  void add(std::string condition, std::string message);
  void merge(const ValidationReport& other, const std::string& prefix = "");
  std::string to_string() const;
};

/// Directed hypergraph over typed variables. A task graph is a hypergraph
/// whose `validate()` report is empty. Edges are kept sorted by id.
class Hypergraph {
public:
  Hypergraph() = default;

  /// Adds the edge and its incident vertices. Throws if the id is taken or
  /// an incident vertex was registered with another sort.
  void add_edge(Task t);
  void add_vertex(const VarId& v);
  void remove_vertex(const std::string& name);

  const std::map<std::string, Sort>& vertices() const { return vertices_; }
  const std::map<std::string, Task>& edges() const { return edges_; }
  bool has_vertex(const std::string& name) const { return vertices_.count(name) != 0; }
  bool has_edge(const std::string& id) const { return edges_.count(id) != 0; }
  const Task& edge(const std::string& id) const;
  Sort sort_of(const std::string& name) const;
  bool empty() const { return vertices_.empty() && edges_.empty(); }

  /// Edge ids writing `name` (a valid TG has at most one).
  std::vector<std::string> writers(const std::string& name) const;
  std::set<std::string> initial_vertices() const;
  std::set<std::string> terminal_vertices() const;

  /// Task-graph conditions (i)-(iv) plus task-level well-formedness.
  ValidationReport validate() const;
  bool is_acyclic() const;
  /// Vertices on some cycle, empty when acyclic.
  std::vector<std::string> cycle_witness() const;

  /// Stratification by longest path from an initial vertex. Vertices written
  /// by tasks with an empty read set start at level 1.
  std::vector<std::set<std::string>> levels() const;
  /// Edge ids in an order where every edge follows the writers of its reads.
  std::vector<std::string> edge_order() const;

  /// True iff a directed path of positive length leads from x to y.
  bool await_dep(const std::string& x, const std::string& y) const;

  Hypergraph subgraph(const std::set<std::string>& edge_ids) const;
  /// Replaces the edges of `sub` by one fresh edge; the result may be cyclic.
  Hypergraph abstraction(const Hypergraph& sub, const std::vector<VarId>& iface_reads,
                         const std::vector<VarId>& iface_writes, const Relation& spec,
                         const std::string& fresh_id) const;

  std::string to_dot(const std::string& name = "G",
                     const std::map<std::string, std::set<std::string>>& clusters = {}) const;

  friend bool operator==(const Hypergraph& a, const Hypergraph& b);

private:
  std::map<std::string, Sort> vertices_;
  std::map<std::string, Task> edges_;
};

using TaskGraph = Hypergraph;

struct UnionResult {
  Hypergraph graph;
  bool acyclic = true;
  /// Vertices written by edges of both operands.
  std::vector<std::string> write_conflicts;
  /// Edge ids present in both operands with different payloads.
  std::vector<std::string> edge_conflicts;
};

UnionResult graph_union(const Hypergraph& g1, const Hypergraph& g2);

/// Brute-force check that the relation of a bool-only TG is total over its
/// initial vertices. Returns false on the first initial valuation with no
/// satisfying completion.
bool bool_tg_total(const Hypergraph& g);

} // namespace hrmv
