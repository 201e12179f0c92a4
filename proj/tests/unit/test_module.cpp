#include <doctest.h>

#include "fixtures.hpp"

using namespace hrmv;
using namespace fixtures;

namespace {

// Random compatible module pair over a shared variable pool; composition
// errors are skipped by the callers.
std::vector<Module> random_family(std::mt19937& rng, int count)
{
  static const std::vector<std::string> pool{"a", "b", "c", "d"};
  std::vector<std::string> outs = pool;
  std::shuffle(outs.begin(), outs.end(), rng);
  std::vector<Module> ms;
  for (int k = 0; k < count; ++k) {
    std::vector<std::string> ins;
    for (const auto& v : pool)
      if (v != outs[k] && std::uniform_int_distribution<int>(0, 2)(rng) == 0) ins.push_back(v);
    ms.push_back(random_module(rng, "m" + std::to_string(k), outs[k], ins));
  }
  return ms;
}

} // namespace

TEST_CASE("the counter module is well formed")
{
  CHECK(m_counter().validate().ok());
  CHECK(m_delay().validate().ok());
  CHECK(m_counter().local_names() == std::set<std::string>{"l1"});
}

TEST_CASE("module validation catches misplaced variables")
{
  Module m = m_counter();
  m.outputs.push_back({"i1", Sort::Bool});
  CHECK_FALSE(m.validate().ok());

  Module n = m_counter();
  n.init["l1"] = Value::integer(0L);
  CHECK_FALSE(n.validate().ok());

  Module p = m_counter();
  p.states.push_back({"s9", Sort::Int});
  CHECK_FALSE(p.validate().ok());
  CHECK_THROWS_AS(p.check(), Error);
}

TEST_CASE("simulation reproduces the counter execution")
{
  std::vector<std::pair<bool, long>> in{{true, 1}, {false, 0}, {true, 2}};
  std::vector<Valuation> rounds;
  for (auto [b, z] : in) rounds.push_back({{"i1", Value::boolean(b)}, {"i2", Value::integer(z)}});
  Run run = simulate(m_counter(), rounds, DomainBounds{});
  long s = 0;  // o2 = i2 + s, s' = o2
  REQUIRE(run.trace.size() == in.size());
  for (std::size_t k = 0; k < in.size(); ++k) {
    CHECK(run.states[k].at("s1") == Value::integer(s));
    s += in[k].second;
    CHECK(run.trace[k].outputs.at("o1") == Value::boolean(in[k].first));
    CHECK(run.trace[k].outputs.at("o2") == Value::integer(s));
  }
  CHECK(run.states.back().at("s1") == Value::integer(s));
  CHECK(simulate(m_counter(), {}, DomainBounds{}).trace.empty());
}

TEST_CASE("parallel composition of counter and delay")
{
  Module pc = parallel_compose(m_counter(), m_delay());
  CHECK(pc.input_names() == std::set<std::string>{"i1"});
  CHECK(pc.output_names() == std::set<std::string>{"i2", "o1", "o2"});
  CHECK(pc.state_names() == std::set<std::string>{"s1", "sd"});
  CHECK(pc.validate().ok());
  CHECK_FALSE(pc.react.await_dep("o2", "i2"));
}

TEST_CASE("incompatible compositions are rejected")
{
  SUBCASE("shared outputs")
  {
    try {
      parallel_compose(m_counter(), m_counter());
      FAIL("expected a composition error");
    } catch (const CompositionError& e) {
      CHECK(e.kind() == CompositionError::Kind::Outputs);
    }
  }
  SUBCASE("combinational loop")
  {
    Module fwd;
    fwd.name = "fwd";
    fwd.inputs = {{"o2", Sort::Int}};
    fwd.outputs = {{"i2", Sort::Int}};
    fwd.react.add_edge(fn("f", {{"o2", Sort::Int}}, {{"i2", Sort::Int}}, {ivar("o2")}));
    try {
      parallel_compose(m_counter(), fwd);
      FAIL("expected a composition error");
    } catch (const CompositionError& e) {
      CHECK(e.kind() == CompositionError::Kind::Cycle);
    }
  }
}

TEST_CASE("top module is a unit for composition")
{
  Module top = top_module();
  CHECK(top.validate().ok());
  CHECK(bounded_equivalent(parallel_compose(m_counter(), top), m_counter(), 2, small_bounds()));
  CHECK(bounded_refines(m_counter(), top, 2, small_bounds()));
}

TEST_CASE("hiding removes outputs only")
{
  Module pc = parallel_compose(m_counter(), m_delay());
  Module h = hide(pc, {"i2"});
  CHECK(h.output_names() == std::set<std::string>{"o1", "o2"});
  CHECK(h.react == pc.react);
  CHECK_THROWS_AS(hide(pc, {"i1"}), Error);
}

TEST_CASE("property modules")
{
  Module always = property_module(PropertyFormula::always(ge0("o2")), {{"o2", Sort::Int}}, "g");
  CHECK(always.validate().ok());
  CHECK(always.output_names() == std::set<std::string>{"o2"});
  CHECK(always.states.empty());
  auto ts = traces(always, 1, small_bounds());
  CHECK(ts.size() == 3);  // o2 in {0, 1, 2}

  Module hist = property_module(PropertyFormula::hist_implies(bvar("a"), bvar("b")), {{"b", Sort::Bool}}, "h");
  CHECK(hist.validate().ok());
  CHECK(hist.state_names() == std::set<std::string>{"h.hist"});
  CHECK(hist.input_names() == std::set<std::string>{"a"});
  // Once a is false, b is free forever.
  for (const auto& t : traces(hist, 3, small_bounds())) {
    bool h = true;
    for (const auto& r : t) {
      h = h && r.inputs.at("a").as_bool();
      if (h) CHECK(r.outputs.at("b").as_bool());
    }
  }
}

TEST_CASE("the counter refines its contract")
{
  Contract c{{ge0("i2")}, {ge0("o2")}};
  GoalModules g = goal_modules(m_counter(), c);
  CHECK(check_static_impl(g.lhs, g.rhs).ok());
  CHECK(bounded_refines(g.lhs, g.rhs, 4, small_bounds()));

  GoalModules bare = goal_modules(m_counter(), Contract{{}, {ge0("o2")}});
  auto cex = find_refinement_violation(bare.lhs, bare.rhs, 4, small_bounds());
  REQUIRE(cex);
  CHECK(cex->size() == 1);
  CHECK(cex->back().outputs.at("o2").as_rational() < 0);
}

TEST_CASE("static implementation conditions")
{
  Module spec = property_module(PropertyFormula::always(ge0("x")), {{"x", Sort::Int}}, "p");
  CHECK(check_static_impl(m_counter(), spec).has("i"));
  Module dep;
  dep.name = "dep";
  dep.inputs = {{"i1", Sort::Bool}};
  dep.outputs = {{"o2", Sort::Int}};
  dep.react.add_edge(fn("t", {{"i1", Sort::Bool}}, {{"o2", Sort::Int}},
                        {Expr::ite(bvar("i1"), Expr::integer(1), Expr::integer(0))}));
  CHECK(check_static_impl(m_counter(), dep).has("iii"));
}

TEST_CASE("algebra laws on random modules")
{
  std::mt19937 rng(3);
  const DomainBounds b = small_bounds();
  int pairs = 0, triples = 0;
  for (int attempt = 0; attempt < 2000 && (pairs < 120 || triples < 100); ++attempt) {
    auto ms = random_family(rng, 3);
    try {
      Module m12 = parallel_compose(ms[0], ms[1]);
      Module m21 = parallel_compose(ms[1], ms[0]);
      if (pairs < 120) {
        CHECK(bounded_equivalent(m12, m21, 4, b));
        CHECK(bounded_refines(m12, ms[0], 4, b));
        CHECK(bounded_refines(ms[0], ms[0], 4, b));
        ++pairs;
      }
      if (triples < 100) {
        Module left = parallel_compose(m12, ms[2]);
        Module right = parallel_compose(ms[0], parallel_compose(ms[1], ms[2]));
        CHECK(bounded_equivalent(left, right, 4, b));
        // m123 <= m12 <= m1, so m123 <= m1.
        CHECK(bounded_refines(left, m12, 4, b));
        CHECK(bounded_refines(left, ms[0], 4, b));
        ++triples;
      }
    } catch (const CompositionError&) {
    }
  }
  CHECK(pairs == 120);
  CHECK(triples == 100);
}
