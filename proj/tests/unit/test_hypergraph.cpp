#include <doctest.h>

#include <algorithm>
#include <functional>

#include "fixtures.hpp"
#include "hrmv/solve.hpp"

using namespace hrmv;
using namespace fixtures;

namespace {

// Longest path from an initial vertex, computed by fixpoint relaxation.
std::map<std::string, int> oracle_levels(const Hypergraph& g)
{
  std::map<std::string, int> lv;
  for (const auto& [v, s] : g.vertices()) lv[v] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [id, t] : g.edges()) {
      int base = 0;
      for (const auto& r : t.reads) base = std::max(base, lv[r.name]);
      for (const auto& w : t.writes)
        if (lv[w.name] < base + 1) {
          lv[w.name] = base + 1;
          changed = true;
        }
    }
  }
  return lv;
}

bool oracle_path(const Hypergraph& g, const std::string& x, const std::string& y)
{
  std::set<std::string> seen, frontier{x};
  while (!frontier.empty()) {
    std::set<std::string> next;
    for (const auto& [id, t] : g.edges()) {
      bool hit = std::any_of(t.reads.begin(), t.reads.end(), [&](const VarId& r) { return frontier.count(r.name); });
      if (!hit) continue;
      for (const auto& w : t.writes)
        if (seen.insert(w.name).second) next.insert(w.name);
    }
    frontier = next;
  }
  return seen.count(y) != 0;
}

// Exhaustive totality: every valuation of the initial vertices extends to a
// valuation of all vertices satisfying every task.
bool oracle_total(const Hypergraph& g)
{
  std::vector<std::string> names;
  for (const auto& [v, s] : g.vertices()) names.push_back(v);
  const auto init = g.initial_vertices();
  const std::size_t n = names.size();
  std::set<std::vector<bool>> covered;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Valuation v;
    for (std::size_t k = 0; k < n; ++k) v[names[k]] = Value::boolean((mask >> k) & 1);
    bool ok = true;
    for (const auto& [id, t] : g.edges()) {
      if (t.rel.kind == Relation::Kind::Functional) {
        for (std::size_t j = 0; j < t.writes.size(); ++j)
          ok = ok && t.rel.assigns[j].eval(v) == v.at(t.writes[j].name);
      } else {
        ok = ok && t.rel.predicate.eval(v).as_bool();
      }
    }
    if (!ok) continue;
    std::vector<bool> key;
    for (const auto& i : init) key.push_back(v.at(i).as_bool());
    covered.insert(key);
  }
  return covered.size() == (std::size_t{1} << init.size());
}

} // namespace

TEST_CASE("the counter task graph is valid and stratified")
{
  Module m = m_counter();
  const Hypergraph& g = m.react;
  CHECK(g.validate().ok());
  CHECK(g.initial_vertices() == std::set<std::string>{"i1", "i2", "s1"});
  CHECK(g.terminal_vertices() == std::set<std::string>{"o1", "o2", "s1'"});
  auto lv = g.levels();
  auto oracle = oracle_levels(g);
  for (std::size_t k = 0; k < lv.size(); ++k)
    for (const auto& v : lv[k]) CHECK(oracle.at(v) == static_cast<int>(k));
  CHECK(g.await_dep("i2", "o2"));
  CHECK_FALSE(g.await_dep("i1", "o2"));
  CHECK_FALSE(g.await_dep("o2", "i2"));
}

TEST_CASE("task graph conditions are reported individually")
{
  SUBCASE("cycle")
  {
    Hypergraph g;
    g.add_edge(fn("a", {{"x", Sort::Bool}}, {{"y", Sort::Bool}}, {bvar("x")}));
    g.add_edge(fn("b", {{"y", Sort::Bool}}, {{"x", Sort::Bool}}, {bvar("y")}));
    auto r = g.validate();
    CHECK(r.has("i"));
    CHECK_FALSE(g.is_acyclic());
    CHECK(g.cycle_witness().size() == 2);
  }
  SUBCASE("isolated vertex")
  {
    Hypergraph g;
    g.add_vertex({"z", Sort::Int});
    CHECK(g.validate().has("ii"));
  }
  SUBCASE("two writers")
  {
    Hypergraph g;
    g.add_edge(fn("a", {{"x", Sort::Bool}}, {{"y", Sort::Bool}}, {bvar("x")}));
    g.add_edge(fn("b", {{"x", Sort::Bool}}, {{"y", Sort::Bool}}, {!bvar("x")}));
    CHECK(g.validate().has("iii"));
  }
  SUBCASE("relation out of scope")
  {
    Hypergraph g;
    g.add_edge(fn("a", {{"x", Sort::Bool}}, {{"y", Sort::Bool}}, {bvar("q")}));
    CHECK(g.validate().has("iv"));
  }
  SUBCASE("self loop")
  {
    Hypergraph g;
    g.add_edge(fn("a", {{"x", Sort::Int}}, {{"x", Sort::Int}}, {ivar("x")}));
    CHECK_FALSE(g.validate().ok());
  }
  SUBCASE("empty graph")
  {
    Hypergraph g;
    CHECK(g.validate().ok());
    CHECK(g.levels().empty());
  }
}

TEST_CASE("structural errors throw")
{
  Hypergraph g;
  g.add_edge(fn("a", {{"x", Sort::Bool}}, {{"y", Sort::Bool}}, {bvar("x")}));
  CHECK_THROWS_AS(g.add_edge(fn("a", {{"x", Sort::Bool}}, {{"z", Sort::Bool}}, {bvar("x")})), Error);
  CHECK_THROWS_AS(g.add_vertex({"x", Sort::Int}), Error);
  CHECK_THROWS_AS(g.subgraph({"missing"}), Error);
}

TEST_CASE("levels, edge order and await dependencies agree with oracles on random graphs")
{
  std::mt19937 rng(7);
  for (int n = 0; n < 200; ++n) {
    Hypergraph g = random_bool_tg(rng);
    REQUIRE(g.validate().ok());
    auto oracle = oracle_levels(g);
    auto lv = g.levels();
    for (std::size_t k = 0; k < lv.size(); ++k)
      for (const auto& v : lv[k]) CHECK(oracle.at(v) == static_cast<int>(k));
    std::set<std::string> written;
    for (const auto& id : g.edge_order()) {
      for (const auto& r : g.edge(id).reads)
        if (!g.writers(r.name).empty()) CHECK(written.count(r.name));
      for (const auto& w : g.edge(id).writes) written.insert(w.name);
    }
    for (const auto& [x, sx] : g.vertices())
      for (const auto& [y, sy] : g.vertices()) CHECK(g.await_dep(x, y) == oracle_path(g, x, y));
  }
}

TEST_CASE("random boolean task graphs are total")
{
  std::mt19937 rng(11);
  for (int n = 0; n < 300; ++n) {
    Hypergraph g = random_bool_tg(rng);
    const bool total = oracle_total(g);
    CHECK(total);
    CHECK(bool_tg_total(g) == total);
  }
}

TEST_CASE("a non-total task is detected")
{
  Hypergraph g;
  g.add_edge(Task{"t", {{"x", Sort::Bool}}, {{"y", Sort::Bool}}, Relation::nondet(bvar("x") && bvar("y"))});
  CHECK_FALSE(bool_tg_total(g));
  CHECK_FALSE(oracle_total(g));
}

TEST_CASE("subgraph and abstraction")
{
  Module m = m_counter();
  Hypergraph sub = m.react.subgraph({"e2", "e3"});
  CHECK(sub.edges().size() == 2);
  CHECK(sub.has_vertex("l1"));
  CHECK_FALSE(sub.has_vertex("o1"));
  Hypergraph abs = m.react.abstraction(sub, {{"i2", Sort::Int}, {"s1", Sort::Int}},
                                       {{"o2", Sort::Int}, {"s1'", Sort::Int}},
                                       Relation::nondet(fixtures::ge0("o2")), "abs");
  CHECK(abs.edges().size() == 2);
  CHECK(abs.has_edge("e1"));
  CHECK(abs.has_edge("abs"));
  CHECK_FALSE(abs.has_vertex("l1"));
}

TEST_CASE("union reports write conflicts and cycles")
{
  Hypergraph a, b;
  a.add_edge(fn("a", {{"x", Sort::Bool}}, {{"y", Sort::Bool}}, {bvar("x")}));
  b.add_edge(fn("b", {{"y", Sort::Bool}}, {{"x", Sort::Bool}}, {bvar("y")}));
  auto u = graph_union(a, b);
  CHECK_FALSE(u.acyclic);
  Hypergraph c;
  c.add_edge(fn("c", {{"z", Sort::Bool}}, {{"y", Sort::Bool}}, {bvar("z")}));
  auto w = graph_union(a, c);
  CHECK(w.write_conflicts == std::vector<std::string>{"y"});
  auto same = graph_union(a, a);
  CHECK(same.edge_conflicts.empty());
  CHECK(same.graph == a);
}

TEST_CASE("solve_graph enumerates nondeterministic writes")
{
  Hypergraph g;
  g.add_edge(Task{"t", {{"x", Sort::Bool}}, {{"y", Sort::Bool}}, Relation::nondet(implies(bvar("x"), bvar("y")))});
  SolveOptions o;
  o.domain = [](const std::string&, Sort) { return std::vector<Value>{Value::boolean(false), Value::boolean(true)}; };
  int count = 0;
  solve_graph(g, {{"x", Value::boolean(false)}}, o, [&](const Valuation&) {
    ++count;
    return true;
  });
  CHECK(count == 2);
  count = 0;
  solve_graph(g, {{"x", Value::boolean(true)}}, o, [&](const Valuation&) {
    ++count;
    return true;
  });
  CHECK(count == 1);
  CHECK_THROWS(solve_graph(g, {}, o, [](const Valuation&) { return true; }));
}

TEST_CASE("DOT output")
{
  CHECK(Hypergraph().to_dot() == "digraph \"G\" {\n}\n");
  Module m = m_counter();
  std::string dot = m.react.to_dot("counter", {{"adder", {"e2"}}});
  CHECK(dot.find("subgraph cluster_0") != std::string::npos);
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("\"i2\" -> \"e:e2\"") != std::string::npos);
  CHECK(dot.find("\"e:e3\" -> \"s1'\"") != std::string::npos);
}
