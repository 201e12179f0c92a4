#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hrmv/hierarchy.hpp"

namespace fixtures {

using namespace hrmv;

inline Expr bvar(const std::string& n) { return Expr::var(n, Sort::Bool); }
inline Expr ivar(const std::string& n) { return Expr::var(n, Sort::Int); }

inline Task fn(const std::string& id, std::vector<VarId> reads, std::vector<VarId> writes, std::vector<Expr> e)
{
  return Task{id, std::move(reads), std::move(writes), Relation::functional(std::move(e))};
}

/// Counter of an adder and a delay: o1 = i1, o2 = i2 + s1, s1' = o2.
inline Module m_counter()
{
  Module m;
  m.name = "Counter";
  m.inputs = {{"i1", Sort::Bool}, {"i2", Sort::Int}};
  m.outputs = {{"o1", Sort::Bool}, {"o2", Sort::Int}};
  m.states = {{"s1", Sort::Int}};
  m.init["s1"] = Value::integer(0L);
  m.react.add_edge(fn("e1", {{"i1", Sort::Bool}}, {{"o1", Sort::Bool}}, {bvar("i1")}));
  m.react.add_edge(fn("e2", {{"i2", Sort::Int}, {"s1", Sort::Int}}, {{"l1", Sort::Int}},
                      {Expr::binary(BinaryOp::Add, ivar("i2"), ivar("s1"))}));
  m.react.add_edge(fn("e3", {{"l1", Sort::Int}}, {{"o2", Sort::Int}, {"s1'", Sort::Int}}, {ivar("l1"), ivar("l1")}));
  return m;
}

/// Unit delay from o2 to i2 starting at 0.
inline Module m_delay()
{
  Module m;
  m.name = "M_delay";
  m.inputs = {{"o2", Sort::Int}};
  m.outputs = {{"i2", Sort::Int}};
  m.states = {{"sd", Sort::Int}};
  m.init["sd"] = Value::integer(0L);
  m.react.add_edge(fn("d1", {{"sd", Sort::Int}}, {{"i2", Sort::Int}}, {ivar("sd")}));
  m.react.add_edge(fn("d2", {{"o2", Sort::Int}}, {{"sd'", Sort::Int}}, {ivar("o2")}));
  return m;
}

inline Expr ge0(const std::string& v) { return Expr::binary(BinaryOp::Ge, ivar(v), Expr::integer(0)); }

inline std::string source_dir() { return HRMV_SOURCE_DIR; }
inline std::string corpus(const std::string& name) { return source_dir() + "/corpus/" + name; }

inline std::string read_file(const std::string& path)
{
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Random boolean expression over `vars` (may be empty).
inline Expr random_bool_expr(std::mt19937& rng, const std::vector<std::string>& vars, int depth = 2)
{
  std::uniform_int_distribution<int> pick(0, 5);
  const int k = depth <= 0 ? (vars.empty() ? 0 : 1) : pick(rng);
  if (vars.empty() || k == 0) return Expr::boolean(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
  if (k == 1 || k == 2) return bvar(vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]);
  if (k == 3) return !random_bool_expr(rng, vars, depth - 1);
  static const BinaryOp ops[] = {BinaryOp::And, BinaryOp::Or, BinaryOp::Xor, BinaryOp::Implies, BinaryOp::Eq};
  return Expr::binary(ops[std::uniform_int_distribution<int>(0, 4)(rng)], random_bool_expr(rng, vars, depth - 1),
                      random_bool_expr(rng, vars, depth - 1));
}

/// Random valid bool-sorted task graph with at most `max_vertices` vertices.
/// Tasks are total by construction: a nondeterministic task always admits
/// the assignment given by its witness expression.
inline Hypergraph random_bool_tg(std::mt19937& rng, int max_vertices = 8)
{
  const int n = std::uniform_int_distribution<int>(2, max_vertices)(rng);
  const int initial = std::uniform_int_distribution<int>(1, std::max(1, n / 2))(rng);
  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  Hypergraph g;
  std::vector<bool> read(n, false);
  int next = initial;
  int id = 0;
  while (next < n) {
    const int width = std::min(n - next, std::uniform_int_distribution<int>(1, 2)(rng));
    std::vector<std::string> reads;
    for (int v = 0; v < next; ++v)
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) reads.push_back(names[v]);
    // Keep initial vertices incident to some task.
    for (int v = 0; v < initial; ++v)
      if (!read[v] && next + width == n && std::find(reads.begin(), reads.end(), names[v]) == reads.end())
        reads.push_back(names[v]);
    for (const auto& r : reads) read[std::stoi(r.substr(1))] = true;
    std::vector<VarId> rv, wv;
    for (const auto& r : reads) rv.push_back({r, Sort::Bool});
    for (int w = next; w < next + width; ++w) wv.push_back({names[w], Sort::Bool});
    Relation rel;
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      std::vector<Expr> assigns;
      for (int w = 0; w < width; ++w) assigns.push_back(random_bool_expr(rng, reads));
      rel = Relation::functional(std::move(assigns));
    } else {
      std::vector<std::string> scope = reads;
      for (const auto& w : wv) scope.push_back(w.name);
      Expr witness = equals(bvar(wv[0].name), random_bool_expr(rng, reads));
      rel = Relation::nondet(witness || random_bool_expr(rng, scope));
    }
    g.add_edge(Task{"t" + std::to_string(id++), rv, wv, rel});
    next += width;
  }
  return g;
}

/// Random small bool module writing `out` from `ins`, with an optional state.
inline Module random_module(std::mt19937& rng, const std::string& name, const std::string& out,
                            const std::vector<std::string>& ins)
{
  Module m;
  m.name = name;
  for (const auto& i : ins) m.inputs.push_back({i, Sort::Bool});
  m.outputs = {{out, Sort::Bool}};
  std::vector<std::string> scope = ins;
  const bool stateful = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  const std::string st = name + "_s";
  if (stateful) {
    m.states = {{st, Sort::Bool}};
    if (std::uniform_int_distribution<int>(0, 2)(rng) != 0)
      m.init[st] = Value::boolean(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
    scope.push_back(st);
  }
  std::vector<VarId> reads;
  for (const auto& v : scope) reads.push_back({v, Sort::Bool});
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    Expr witness = equals(bvar(out), random_bool_expr(rng, scope));
    std::vector<std::string> all = scope;
    all.push_back(out);
    m.react.add_edge(Task{name + ".out", reads, {{out, Sort::Bool}},
                          Relation::nondet(witness || random_bool_expr(rng, all))});
  } else {
    m.react.add_edge(fn(name + ".out", reads, {{out, Sort::Bool}}, {random_bool_expr(rng, scope)}));
  }
  if (stateful) {
    std::vector<VarId> r2 = reads;
    r2.push_back({out, Sort::Bool});
    std::vector<std::string> s2 = scope;
    s2.push_back(out);
    m.react.add_edge(fn(name + ".next", r2, {{st + "'", Sort::Bool}}, {random_bool_expr(rng, s2)}));
  }
  for (const auto& i : ins)
    if (!m.react.has_vertex(i)) m.react.add_vertex({i, Sort::Bool});
  return m;
}

/// Random boolean Lustre expression over `vars`, with `pre` and `->`.
inline std::string random_lustre_expr(std::mt19937& rng, const std::vector<std::string>& vars, int depth = 2)
{
  auto pick = [&](int hi) { return std::uniform_int_distribution<int>(0, hi)(rng); };
  const auto var = [&] { return vars[static_cast<std::size_t>(pick(static_cast<int>(vars.size()) - 1))]; };
  const int k = depth <= 0 ? pick(1) : pick(7);
  switch (k) {
  case 0: return pick(1) ? "true" : "false";
  case 1:
  case 2: return var();
  case 3: return "not " + random_lustre_expr(rng, vars, depth - 1);
  case 4: return std::string("(") + (pick(1) ? "true" : "false") + " -> pre " + var() + ")";
  default: {
    static const char* ops[] = {"and", "or", "xor", "=>", "="};
    return "(" + random_lustre_expr(rng, vars, depth - 1) + " " + ops[pick(4)] + " " +
           random_lustre_expr(rng, vars, depth - 1) + ")";
  }
  }
}

/// Random two-level boolean program: leaf nodes and a main node `Top`
/// calling them in an acyclic chain, optionally closing a loop through `pre`.
inline std::string random_lustre_program(std::mt19937& rng)
{
  auto pick = [&](int hi) { return std::uniform_int_distribution<int>(0, hi)(rng); };
  std::ostringstream out;
  const int leaves = 1 + pick(1);
  for (int n = 0; n < leaves; ++n) {
    out << "node Leaf" << n << " (a : bool; b : bool)\nreturns (y : bool);\n";
    out << "var m : bool;\nlet\n";
    out << "  m = " << random_lustre_expr(rng, {"a", "b"}) << ";\n";
    out << "  y = " << random_lustre_expr(rng, {"a", "b", "m"}) << ";\n";
    out << "tel\n\n";
  }
  const int calls = 1 + pick(2);
  out << "node Top (x : bool; z : bool)\nreturns (o : bool);\nvar ";
  for (int c = 0; c < calls; ++c) out << (c ? ", " : "") << "r" << c;
  out << " : bool;\nlet\n";
  std::vector<std::string> avail{"x", "z"};
  for (int c = 0; c < calls; ++c) {
    std::vector<std::string> args;
    for (int j = 0; j < 2; ++j) {
      if (c > 0 && pick(3) == 0) args.push_back("false -> pre r" + std::to_string(calls - 1));
      else args.push_back(random_lustre_expr(rng, avail, 1));
    }
    out << "  r" << c << " = Leaf" << pick(leaves - 1) << "(" << args[0] << ", " << args[1] << ");\n";
    avail.push_back("r" + std::to_string(c));
  }
  out << "  o = " << random_lustre_expr(rng, avail) << ";\n";
  out << "tel\n";
  return out.str();
}

inline DomainBounds small_bounds()
{
  DomainBounds b;
  b.int_min = -2;
  b.int_max = 2;
  return b;
}

} // namespace fixtures
