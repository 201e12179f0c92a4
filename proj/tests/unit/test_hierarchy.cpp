#include <doctest.h>

#include "fixtures.hpp"
#include "hrmv/lustre/elaborate.hpp"
#include "hrmv/lustre/parser.hpp"

using namespace hrmv;
using namespace fixtures;

namespace {

lustre::Elaboration load(const std::string& file, const std::string& main)
{
  return lustre::elaborate_main(lustre::parse_file(corpus(file)), main);
}

std::set<std::string> names(const std::vector<VarId>& vs)
{
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(v.name);
  return out;
}

std::set<std::string> edge_ids(const Hypergraph& g)
{
  std::set<std::string> out;
  for (const auto& [id, t] : g.edges()) out.insert(id);
  return out;
}

} // namespace

TEST_CASE("elaborated two-counter loop is a valid hierarchy")
{
  auto e = load("two_counters_strict.lus", "TwoCounters");
  const auto& h = e.hier;
  CHECK(validate_hierarchy(h).ok());
  REQUIRE(h.bindings.size() == 2);
  CHECK(h.bindings[0].instance == "Counter0");
  CHECK(h.bindings[1].instance == "Counter1");
  CHECK(h.bindings[0].module().input_names() == std::set<std::string>{"Counter0.i1", "Counter0.i2"});
  CHECK(h.bindings[1].module().output_names() == std::set<std::string>{"Counter1.o1", "Counter1.o2"});
  CHECK(h.module.is_state("Counter0.s1"));
  CHECK(flatten(h).validate().ok());
}

TEST_CASE("hierarchy violations are reported by condition")
{
  auto e = load("two_counters_strict.lus", "TwoCounters");

  SUBCASE("initial condition mismatch")
  {
    auto h = e.hier;
    h.module.init["Counter0.s1"] = Value::integer(5L);
    CHECK(validate_hierarchy(h).has("iii"));
    CHECK_THROWS_AS(flatten(h), Error);
  }
  SUBCASE("child edge missing from the parent")
  {
    auto h = e.hier;
    h.bindings[0].edge_ids.insert("no-such-edge");
    CHECK(validate_hierarchy(h).has("iv"));
  }
  SUBCASE("child state not in the parent")
  {
    auto h = e.hier;
    h.bindings[1].child.module.states.push_back({"ghost", Sort::Int});
    CHECK(validate_hierarchy(h).has("ii"));
  }
  SUBCASE("overlapping children")
  {
    auto h = e.hier;
    h.bindings[1].edge_ids.insert(*h.bindings[0].edge_ids.begin());
    CHECK(validate_hierarchy(h).has("disjoint"));
  }
}

TEST_CASE("adapter read and write sets")
{
  auto e = load("counter_delay.lus", "CounterDelay");
  const auto& h = e.hier;
  Module a = derive_adapter(h);
  std::set<std::string> ins = h.module.input_names(), outs = h.module.output_names();
  std::set<std::string> edges = edge_ids(h.module.react), child_states;
  for (const auto& b : h.bindings) {
    for (const auto& v : b.module().outputs) ins.insert(v.name);
    for (const auto& v : b.module().inputs) outs.insert(v.name);
    for (const auto& id : b.edge_ids) edges.erase(id);
    for (const auto& s : b.module().states) child_states.insert(s.name);
  }
  CHECK(a.input_names() == ins);
  CHECK(a.output_names() == outs);
  CHECK(edge_ids(a.react) == edges);
  for (const auto& s : a.states) CHECK_FALSE(child_states.count(s.name));
  CHECK(a.validate().ok());
  // A leaf is its own adapter.
  const Module leaf = derive_adapter(e.children[0].hier);
  CHECK(leaf.react == e.children[0].hier.module.react);
  CHECK(leaf.input_names() == e.children[0].hier.module.input_names());
}

TEST_CASE("recomposition preserves traces of the corpus hierarchies")
{
  DomainBounds b = small_bounds();
  for (auto [file, main] : {std::pair{"two_counters_strict.lus", "TwoCounters"},
                            std::pair{"counter_delay.lus", "CounterDelay"}}) {
    CAPTURE(file);
    auto e = load(file, main);
    Module flat = flatten(e.hier);
    Module re = recompose(decompose(e.hier));
    CHECK(re.input_names() == flat.input_names());
    CHECK(re.output_names() == flat.output_names());
    CHECK(traces(flat, 3, b) == traces(re, 3, b));
  }
}

TEST_CASE("recomposition preserves traces of random hierarchies")
{
  std::mt19937 rng(5);
  const DomainBounds b = small_bounds();
  int checked = 0;
  for (int n = 0; n < 80; ++n) {
    const std::string src = random_lustre_program(rng);
    CAPTURE(src);
    auto e = lustre::elaborate_main(lustre::parse(src), "Top");
    REQUIRE(validate_hierarchy(e.hier).ok());
    Module flat = flatten(e.hier);
    Module re = recompose(decompose(e.hier));
    CHECK(traces(flat, 3, b) == traces(re, 3, b));
    ++checked;
  }
  CHECK(checked == 80);
}

TEST_CASE("abstraction replaces children by contract edges")
{
  auto e = load("two_counters_int.lus", "TwoCounters");
  std::map<std::string, Contract> by_instance;
  for (std::size_t j = 0; j < e.children.size(); ++j) by_instance[e.hier.bindings[j].instance] = e.children[j].contract;
  Module abs = abstract_submodules(e.hier, by_instance);

  for (const auto& bnd : e.hier.bindings) {
    CHECK(abs.react.has_edge("abs:" + bnd.instance));
    for (const auto& id : bnd.edge_ids) CHECK_FALSE(abs.react.has_edge(id));
    CHECK(abs.is_state(bnd.instance + ".hist"));
    CHECK(abs.init.at(bnd.instance + ".hist") == Value::boolean(true));
    for (const auto& s : bnd.module().states) CHECK_FALSE(abs.is_state(s.name));
    const Task& t = abs.react.edge("abs:" + bnd.instance);
    CHECK(t.rel.kind == Relation::Kind::Opaque);
    CHECK(names(t.writes).count(primed(bnd.instance + ".hist")));
  }
  CHECK(abs.input_names() == e.hier.module.input_names());
  CHECK(abs.output_names() == e.hier.module.output_names());
  // The loop through both counters becomes combinational once the delays
  // inside them are hidden.
  CHECK(abs.validate().has("i"));

  CHECK_THROWS_AS(abstract_submodules(e.hier, {{"Nobody", Contract{}}}), Error);
  Contract bad{{ge0("Counter0.o2")}, {}};
  CHECK_THROWS_AS(abstract_submodules(e.hier, {{"Counter0", bad}}), Error);
}

TEST_CASE("obligations extend the adapter contract with child contracts")
{
  auto e = load("counter_delay.lus", "CounterDelay");
  std::vector<Contract> subs;
  for (const auto& c : e.children) subs.push_back(c.contract);
  auto obs = gen_obligations(e.hier, e.contract, subs);
  REQUIRE(obs.size() == e.hier.bindings.size() + 1);
  for (std::size_t j = 0; j < subs.size(); ++j) CHECK(obs[j].label == "sub:" + e.hier.bindings[j].instance);
  const Contract& ad = obs.back().contract;
  CHECK(obs.back().label == "adapter");
  std::size_t na = e.contract.assumes.size(), ng = e.contract.guarantees.size();
  for (const auto& s : subs) {
    na += s.guarantees.size();
    ng += s.assumes.size();
  }
  CHECK(ad.assumes.size() == na);
  CHECK(ad.guarantees.size() == ng);
  for (const auto& s : subs)
    for (const auto& g : s.guarantees)
      CHECK(std::find(ad.assumes.begin(), ad.assumes.end(), g) != ad.assumes.end());
  CHECK_THROWS_AS(gen_obligations(e.hier, e.contract, {}), Error);
}
