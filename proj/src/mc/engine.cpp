#include "hrmv/mc/engine.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "hrmv/mc/sexpr.hpp"

namespace hrmv::mc {

std::string_view verdict_name(CheckResult::Verdict v)
{
  switch (v) {
  case CheckResult::Verdict::Valid: return "valid";
  case CheckResult::Verdict::Falsified: return "falsified";
  case CheckResult::Verdict::Unknown: return "unknown";
  }
  return "?";
}

namespace {

Value default_value(Sort s)
{
  switch (s) {
  case Sort::Bool: return Value::boolean(false);
  case Sort::Int: return Value::integer(0L);
  case Sort::Real: return Value::real(0);
  case Sort::Unit: break;
  }
  return Value::unit();
}

class Session {
public:
  Session(const TransitionSystem& ts, const EngineOptions& opt, std::stop_token stop)
      : ts_(ts), opt_(opt), stop_(std::move(stop)), cfg_(resolve_solver(opt.solver)),
        start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(std::max(0.0, opt.budget_secs))))
  {
  }

  SolveOutcome ask(std::size_t k, Query q, const std::vector<std::string>& lemmas = {})
  {
    const std::string script = emit_smt(ts_, k, q, lemmas);
    if (!opt_.dump_smt_dir.empty()) {
      std::filesystem::create_directories(opt_.dump_smt_dir);
      std::string file = ts_.name + "-" + std::string(query_name(q)) + "-k" + std::to_string(k) + ".smt2";
      std::replace(file.begin(), file.end(), '/', '_');
      std::ofstream(std::filesystem::path(opt_.dump_smt_dir) / file) << script;
    }
    return run_query(cfg_, script, deadline_, stop_);
  }

  bool out_of_time() const { return stop_.stop_requested() || Clock::now() >= deadline_; }
  bool no_budget() const { return opt_.budget_secs <= 0; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  CheckResult finish(CheckResult r) const
  {
    r.seconds = elapsed();
    return r;
  }

  CheckResult unknown(std::string reason) const
  {
    CheckResult r;
    r.reason = std::move(reason);
    return finish(std::move(r));
  }

  CheckResult falsified(const std::string& method, std::size_t k, const std::string& model) const
  {
    CheckResult r;
    r.verdict = CheckResult::Verdict::Falsified;
    r.method = method;
    r.k = k;
    r.cex = parse_cex(model, ts_, k);
    if (auto why = replay(ts_, *r.cex); !why.empty())
      throw Error("engine bug: counterexample of " + ts_.name + " does not replay: " + why);
    return finish(std::move(r));
  }

private:
  const TransitionSystem& ts_;
  const EngineOptions& opt_;
  std::stop_token stop_;
  SolverConfig cfg_;
  Clock::time_point start_;
  Clock::time_point deadline_;
};

bool holds(const Expr& e, const Valuation& frame) { return e.eval(frame).as_bool(); }

/// Whether a task relation holds on a complete valuation.
bool task_holds(const Task& t, const Valuation& v)
{
  switch (t.rel.kind) {
  case Relation::Kind::Functional:
    for (std::size_t j = 0; j < t.writes.size(); ++j)
      if (!(t.rel.assigns[j].eval(v) == v.at(t.writes[j].name))) return false;
    return true;
  case Relation::Kind::Nondet: return holds(t.rel.predicate, v);
  case Relation::Kind::Opaque: {
    bool active = holds(t.rel.assume, v);
    if (!t.rel.hist.empty()) {
      active = active && v.at(t.rel.hist).as_bool();
      if (v.at(primed(t.rel.hist)).as_bool() != active) return false;
    }
    return !active || holds(t.rel.guarantee, v);
  }
  }
  return false;
}

} // namespace

CheckResult bmc(const TransitionSystem& ts, const EngineOptions& opt, std::stop_token stop)
{
  Session s(ts, opt, std::move(stop));
  if (s.no_budget()) return s.unknown("budget exhausted");
  for (std::size_t k = 0; k <= opt.bmc_bound; ++k) {
    SolveOutcome o = s.ask(k, Query::Bmc);
    if (o.result == SatResult::Sat) return s.falsified("bmc", k, o.model);
    if (o.result == SatResult::Unknown) return s.unknown(o.reason);
  }
  return s.unknown("bmc bound " + std::to_string(opt.bmc_bound) + " reached");
}

CheckResult kinduction(const TransitionSystem& ts, const EngineOptions& opt, std::stop_token stop)
{
  Session s(ts, opt, std::move(stop));
  if (s.no_budget()) return s.unknown("budget exhausted");
  std::vector<std::string> lemmas = ts.lemma_candidates;
  std::size_t k = 1;
  while (k <= opt.max_k) {
    // Base: no reachable violation within k-1 rounds.
    SolveOutcome base = s.ask(k - 1, Query::Base, lemmas);
    if (base.result == SatResult::Unknown) return s.unknown(base.reason);
    if (base.result == SatResult::Sat) {
      Counterexample cex = parse_cex(base.model, ts, k - 1);
      const Valuation& last = cex.frames.at(k - 1);
      bool props_ok = true;
      for (const auto& p : ts.props) props_ok = props_ok && holds(p.formula, last);
      if (!props_ok) return s.falsified("k-induction", k - 1, base.model);
      const std::size_t before = lemmas.size();
      std::erase_if(lemmas, [&](const std::string& l) { return !last.at(l).as_bool(); });
      if (lemmas.size() == before) throw Error("engine bug: base counterexample violates nothing");
      k = 1;
      continue;
    }
    SolveOutcome step = s.ask(k, Query::Step, lemmas);
    if (step.result == SatResult::Unknown) return s.unknown(step.reason);
    if (step.result == SatResult::Unsat) {
      CheckResult r;
      r.verdict = CheckResult::Verdict::Valid;
      r.method = "k-induction";
      r.k = k;
      r.lemmas = lemmas;
      return s.finish(std::move(r));
    }
    ++k;
  }
  return s.unknown("k-induction bound " + std::to_string(opt.max_k) + " reached");
}

CheckResult check(const TransitionSystem& ts, const EngineOptions& opt)
{
  if (opt.budget_secs <= 0) {
    CheckResult r;
    r.reason = "budget exhausted";
    return r;
  }
  std::stop_source cancel;
  std::mutex mu;
  std::optional<CheckResult> winner;
  std::vector<CheckResult> finished;
  std::exception_ptr failure;

  auto run = [&](auto engine) {
    return [&, engine](std::stop_token own) {
      (void)own;
      try {
        CheckResult r = engine(ts, opt, cancel.get_token());
        std::lock_guard lock(mu);
        if (r.verdict != CheckResult::Verdict::Unknown && !winner) {
          winner = r;
          cancel.request_stop();
        }
        finished.push_back(std::move(r));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        cancel.request_stop();
      }
    };
  };
  {
    std::jthread a(run([](const TransitionSystem& t, const EngineOptions& o, std::stop_token st) {
      return bmc(t, o, std::move(st));
    }));
    std::jthread b(run([](const TransitionSystem& t, const EngineOptions& o, std::stop_token st) {
      return kinduction(t, o, std::move(st));
    }));
  }
  if (winner) return *winner;
  if (failure) std::rethrow_exception(failure);
  CheckResult r;
  for (const auto& f : finished) {
    if (!r.reason.empty()) r.reason += "; ";
    r.reason += f.reason;
    r.seconds = std::max(r.seconds, f.seconds);
  }
  return r;
}

Counterexample parse_cex(const std::string& model, const TransitionSystem& ts, std::size_t k)
{
  auto exprs = parse_sexprs(model);
  if (exprs.empty()) throw Error("no model in solver answer");
  std::vector<SExpr> defs;
  for (const auto& e : exprs) {
    if (e.is_atom) throw Error("unexpected token in model: " + e.atom);
    if (!e.list.empty() && e.list[0].is_atom && e.list[0].atom == "error")
      throw Error("solver error: " + e.to_string());
    for (const auto& d : e.list) {
      if (d.is_atom) continue;  // the `model` keyword of older solvers
      if (d.list.size() == 5 && d.list[0].is_atom && d.list[0].atom == "define-fun") defs.push_back(d);
    }
  }

  std::map<std::string, Sort> sorts;
  for (const auto& v : ts.frame_vars) sorts[v.name] = v.sort;
  std::map<std::string, Value> raw;
  for (const auto& d : defs) {
    const std::string& sym = d.list[1].atom;
    auto at = sym.rfind('@');
    if (at == std::string::npos) continue;
    auto it = sorts.find(sym.substr(0, at));
    if (it == sorts.end()) continue;
    raw[sym] = sexpr_value(d.list[4], it->second);
  }

  auto lookup = [&](const std::string& v, Sort s, std::size_t i) {
    auto it = raw.find(v + "@" + std::to_string(i));
    return it == raw.end() ? default_value(s) : it->second;
  };

  Counterexample cex;
  for (std::size_t i = 0; i <= k; ++i) {
    Valuation f;
    for (const auto& v : ts.frame_vars) f[v.name] = lookup(v.name, v.sort, i);
    cex.frames.push_back(std::move(f));
  }
  for (const auto& s : ts.states)
    if (s.sort != Sort::Unit) cex.initial[s.name] = cex.frames.front().at(s.name);
  for (const auto& f : cex.frames) {
    Round r;
    for (const auto& v : ts.subject.inputs) r.inputs[v.name] = f.count(v.name) ? f.at(v.name) : Value::unit();
    for (const auto& v : ts.subject.outputs) r.outputs[v.name] = f.count(v.name) ? f.at(v.name) : Value::unit();
    cex.trace.push_back(std::move(r));
  }
  // States after the last round.
  Valuation after;
  for (const auto& s : ts.states)
    if (s.sort != Sort::Unit) after[s.name] = lookup(s.name, s.sort, k + 1);
  cex.frames.push_back(std::move(after));
  return cex;
}

std::string replay(const TransitionSystem& ts, const Counterexample& cex)
{
  const Module& m = ts.subject;
  DomainBounds bounds;
  bounds.clamp_ints = false;
  const std::size_t rounds = cex.trace.size();
  if (rounds == 0) return "empty counterexample";

  for (const auto& [s, v] : m.init)
    if (auto it = cex.initial.find(s); it == cex.initial.end() || !(it->second == v))
      return "initial value of " + s + " differs from Init";

  Valuation state = cex.initial;
  for (std::size_t i = 0; i < rounds; ++i) {
    const Valuation& frame = cex.frames.at(i);
    for (const auto& [s, v] : state)
      if (!(frame.at(s) == v)) return "state " + s + " diverges in round " + std::to_string(i);
    Valuation inputs, fixed;
    for (const auto& v : m.inputs) inputs[v.name] = frame.at(v.name);
    for (const auto& [name, value] : frame)
      if (!m.is_input(name) && !m.is_state(name) && m.react.has_vertex(name)) fixed[name] = value;
    if (ts.cyclic) {
      // No evaluation order exists; check every task on the model values.
      if (i + 1 >= cex.frames.size()) return "model lacks the states after round " + std::to_string(i);
      Valuation full = frame;
      for (const auto& [s, v] : cex.frames[i + 1]) full[primed(s)] = v;
      for (const auto& [id, t] : m.react.edges())
        if (!task_holds(t, full)) return "task " + id + " fails in round " + std::to_string(i);
      for (const auto& a : ts.assumes)
        if (!holds(a.formula, frame)) return a.name + " fails in round " + std::to_string(i);
      bool ok = true;
      for (const auto& p : ts.props) ok = ok && holds(p.formula, frame);
      if (i + 1 < rounds && !ok) return "violation before the last round";
      if (i + 1 == rounds && ok) return "no violation in the last round";
      state = cex.frames[i + 1];
      continue;
    }
    auto results = step(m, state, inputs, bounds, fixed);
    if (results.empty()) return "no reaction matches round " + std::to_string(i);
    const StepResult* chosen = &results.front();
    if (i + 1 < cex.frames.size())
      for (const auto& r : results) {
        bool match = true;
        for (const auto& [s, v] : r.next)
          if (auto it = cex.frames[i + 1].find(s); it != cex.frames[i + 1].end() && !(it->second == v))
            match = false;
        if (match) {
          chosen = &r;
          break;
        }
      }
    for (const auto& [o, v] : chosen->outputs)
      if (!(cex.trace[i].outputs.at(o) == v)) return "output " + o + " diverges in round " + std::to_string(i);
    for (const auto& a : ts.assumes)
      if (!holds(a.formula, frame)) return a.name + " fails in round " + std::to_string(i);
    bool props_ok = true;
    for (const auto& p : ts.props) props_ok = props_ok && holds(p.formula, frame);
    if (i + 1 < rounds && !props_ok) return "violation before the last round";
    if (i + 1 == rounds && props_ok) return "no violation in the last round";
    state = chosen->next;
  }
  return "";
}

} // namespace hrmv::mc
