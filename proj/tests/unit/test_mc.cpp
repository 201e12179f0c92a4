#include <doctest.h>

#include <cstdlib>

#include "fixtures.hpp"
#include "hrmv/lustre/elaborate.hpp"
#include "hrmv/lustre/parser.hpp"
#include "hrmv/mc/engine.hpp"
#include "hrmv/mc/sexpr.hpp"

using namespace hrmv;
using namespace hrmv::mc;
using namespace fixtures;

namespace {

using V = CheckResult::Verdict;

EngineOptions quick()
{
  EngineOptions o;
  o.max_k = 8;
  o.bmc_bound = 8;
  o.budget_secs = 60;
  return o;
}

Contract counter_contract() { return {{ge0("i2")}, {ge0("o2")}}; }

// Explicit-state search: length of the shortest run that violates `prop`
// in its last round, or nothing when no reachable round violates it.
std::optional<std::size_t> oracle_violation(const Module& m, const Expr& assume, const Expr& prop)
{
  const DomainBounds b = small_bounds();
  std::set<Valuation> seen, frontier;
  for (const auto& s : initial_states(m, b)) frontier.insert(s);
  seen = frontier;
  for (std::size_t depth = 0; !frontier.empty(); ++depth) {
    std::set<Valuation> next;
    for (const auto& s : frontier)
      for (const auto& in : input_valuations(m, b)) {
        if (!assume.eval(in).as_bool()) continue;
        for (const auto& r : step(m, s, in, b)) {
          Valuation full = s;
          full.insert(in.begin(), in.end());
          full.insert(r.outputs.begin(), r.outputs.end());
          if (!prop.eval(full).as_bool()) return depth;
          if (!seen.count(r.next)) next.insert(r.next);
        }
      }
    seen.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return std::nullopt;
}

std::string golden(const std::string& name) { return read_file(source_dir() + "/tests/golden/" + name); }

} // namespace

TEST_CASE("encoding sizes")
{
  auto ts = encode(m_counter(), counter_contract());
  CHECK(ts.states.size() == 1);
  CHECK(ts.props.size() == 1);
  CHECK(ts.assumes.size() == 1);
  CHECK(ts.init.size() == 1);
  CHECK(ts.trans.size() == 4);  // o1, l1, o2, s1'
  CHECK(ts.frame_vars.size() == 6);
  CHECK_FALSE(ts.cyclic);

  auto filter = lustre::elaborate_main(lustre::parse_file(corpus("nfilters_2.lus")), "Filter");
  auto fts = encode(filter.hier.module, filter.contract);
  CHECK(fts.states.size() == 2);
  CHECK(fts.props.size() == 2);
  CHECK(fts.assumes.size() == 2);
}

TEST_CASE("encoding rejects nonlinear arithmetic and unknown names")
{
  Module m = m_counter();
  Contract sq{{}, {Expr::binary(BinaryOp::Ge, Expr::binary(BinaryOp::Mul, ivar("o2"), ivar("o2")), Expr::integer(0))}};
  CHECK_THROWS_AS(encode(m, sq), Error);
  CHECK_THROWS_AS(encode(m, Contract{{}, {ge0("nobody")}}), Error);
}

TEST_CASE("emitted scripts declare one copy per frame")
{
  auto ts = encode(m_counter(), counter_contract());
  for (std::size_t k : {0U, 1U, 3U}) {
    const std::string s = emit_smt(ts, k, Query::Bmc);
    std::size_t decls = 0;
    for (std::size_t at = s.find("(declare-const"); at != std::string::npos; at = s.find("(declare-const", at + 1))
      ++decls;
    CHECK(decls == ts.frame_vars.size() * (k + 1) + ts.states.size());
    CHECK(s.find(frame_symbol("o2", k)) != std::string::npos);
    CHECK(s.find(frame_symbol("o2", k + 1)) == std::string::npos);
  }
  CHECK(emit_smt(ts, 2, Query::Step).find("|s1@0| 0") == std::string::npos);
  CHECK(frame_smt(equals(ivar("s1'"), ivar("o2")), 3) == "(= |s1@4| |o2@3|)");
}

TEST_CASE("emitted scripts match the golden files")
{
  auto ts = encode(m_counter(), counter_contract(), "Counter");
  CHECK(emit_smt(ts, 1, Query::Base) == golden("counter_base_k1.smt2"));
  CHECK(emit_smt(ts, 1, Query::Step) == golden("counter_step_k1.smt2"));
}

TEST_CASE("s-expressions and model literals")
{
  auto es = parse_sexprs("(model (define-fun |o2@0| () Int (- 3)) (define-fun x () Real (/ 1.0 3.0)))");
  REQUIRE(es.size() == 1);
  REQUIRE(es[0].list.size() == 3);
  CHECK(es[0].list[1].list[1].atom == "o2@0");
  CHECK(sexpr_value(es[0].list[1].list[4], Sort::Int) == Value::integer(-3L));
  CHECK(sexpr_value(es[0].list[2].list[4], Sort::Real) == Value::real(mpq_class(1, 3)));
  CHECK(sexpr_value(parse_sexprs("1.5")[0], Sort::Real) == Value::real(mpq_class(3, 2)));
  CHECK(sexpr_value(parse_sexprs("(- 2.5)")[0], Sort::Real) == Value::real(mpq_class(-5, 2)));
  CHECK(sexpr_value(parse_sexprs("(to_real 4)")[0], Sort::Real) == Value::real(mpq_class(4)));
  CHECK(sexpr_value(parse_sexprs("true")[0], Sort::Bool) == Value::boolean(true));
  CHECK_THROWS_AS(parse_sexprs("(a (b)"), Error);
}

TEST_CASE("the counter contract is 1-inductive")
{
  auto r = check(encode(m_counter(), counter_contract()), quick());
  CHECK(r.verdict == V::Valid);
  CHECK(r.method == "k-induction");
  CHECK(r.k == 1);
}

TEST_CASE("without its assumption the counter fails at once")
{
  auto ts = encode(m_counter(), Contract{{}, {ge0("o2")}});
  auto r = bmc(ts, quick());
  REQUIRE(r.verdict == V::Falsified);
  CHECK(r.k == 0);
  REQUIRE(r.cex);
  CHECK(r.cex->trace.size() == 1);
  CHECK(r.cex->trace[0].inputs.at("i2").as_rational() < 0);
  CHECK(replay(ts, *r.cex) == "");

  Counterexample forged = *r.cex;
  forged.trace[0].outputs["o2"] = Value::integer(7L);
  CHECK(replay(ts, forged) != "");
  forged = *r.cex;
  forged.initial["s1"] = Value::integer(4L);
  CHECK(replay(ts, forged) != "");
}

TEST_CASE("parse_cex reads frames and defaults missing values")
{
  auto ts = encode(m_counter(), Contract{{}, {ge0("o2")}});
  auto cex = parse_cex("((define-fun |i2@0| () Int (- 1)) (define-fun |o2@0| () Int (- 1))"
                       " (define-fun |l1@0| () Int (- 1)) (define-fun |s1@0| () Int 0)"
                       " (define-fun |s1@1| () Int (- 1)) (define-fun |i1@0| () Bool false)"
                       " (define-fun |o1@0| () Bool false))",
                       ts, 0);
  REQUIRE(cex.frames.size() == 2);
  CHECK(cex.initial.at("s1") == Value::integer(0L));
  CHECK(cex.frames[1].at("s1") == Value::integer(-1L));
  CHECK(cex.trace[0].outputs.at("o2") == Value::integer(-1L));
  CHECK(replay(ts, cex) == "");
  auto sparse = parse_cex("((define-fun |i2@0| () Int 2))", ts, 0);
  CHECK(sparse.frames[0].at("o1") == Value::boolean(false));
}

TEST_CASE("a non-inductive property stays unknown within the bound")
{
  // s counts 0..3 and wraps. o <= 3 is 1-inductive; o != -5 holds too, but
  // the unreachable chain -5-k, ..., -5 defeats every k.
  Module m;
  m.name = "wrap";
  m.outputs = {{"o", Sort::Int}};
  m.states = {{"s", Sort::Int}};
  m.init["s"] = Value::integer(0L);
  m.react.add_edge(fn("o", {{"s", Sort::Int}}, {{"o", Sort::Int}}, {ivar("s")}));
  m.react.add_edge(fn("n", {{"s", Sort::Int}}, {{"s'", Sort::Int}},
                      {Expr::ite(Expr::binary(BinaryOp::Ge, ivar("s"), Expr::integer(3)), Expr::integer(0),
                                 Expr::binary(BinaryOp::Add, ivar("s"), Expr::integer(1)))}));
  Contract c{{}, {Expr::binary(BinaryOp::Le, ivar("o"), Expr::integer(3))}};
  auto r = check(encode(m, c), quick());
  CHECK(r.verdict == V::Valid);
  Contract neq{{}, {Expr::binary(BinaryOp::Neq, ivar("o"), Expr::integer(-5))}};
  auto u = check(encode(m, neq), quick());
  CHECK(u.verdict == V::Unknown);
  CHECK(u.reason.find("bound") != std::string::npos);
}

TEST_CASE("budget and solver failures")
{
  EngineOptions o = quick();
  o.budget_secs = 0;
  CHECK(check(encode(m_counter(), counter_contract()), o).verdict == V::Unknown);
  EngineOptions bad = quick();
  bad.solver = "/nonexistent/solver";
  CHECK_THROWS_AS(check(encode(m_counter(), counter_contract()), bad), Error);
  CHECK(resolve_solver("z3").args == std::vector<std::string>{"-in", "-smt2"});
}

TEST_CASE("engine verdicts agree with explicit-state search")
{
  std::mt19937 rng(41);
  int valid = 0, falsified = 0, unknown = 0;
  const EngineOptions opt = quick();
  for (int n = 0; n < 100; ++n) {
    Module m0 = random_module(rng, "m0", "a", {"x", "b"});
    Module m1 = random_module(rng, "m1", "b", {"x"});
    Module m = parallel_compose(m0, m1);
    std::vector<std::string> vars{"x", "a", "b"};
    for (const auto& s : m.states) vars.push_back(s.name);
    const Expr prop = random_bool_expr(rng, vars, 2) || random_bool_expr(rng, vars, 1);
    const Expr assume = (rng() % 2) ? random_bool_expr(rng, {"x"}, 1) : Expr::boolean(true);
    Contract c{{assume}, {prop}};
    CAPTURE(prop.to_string());
    CAPTURE(assume.to_string());
    const auto expected = oracle_violation(m, assume, prop);
    auto ts = encode(m, c);
    auto r = check(ts, opt);
    if (expected) {
      REQUIRE(r.verdict == V::Falsified);
      CHECK(r.k == *expected);
      CHECK(replay(ts, *r.cex) == "");
      ++falsified;
    } else {
      CHECK(r.verdict != V::Falsified);
      (r.verdict == V::Valid ? valid : unknown)++;
    }
  }
  MESSAGE("valid " << valid << ", falsified " << falsified << ", unknown " << unknown);
  CHECK(valid >= 10);
  CHECK(falsified >= 10);
}
