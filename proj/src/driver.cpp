#include "hrmv/driver.hpp"

#include <atomic>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hrmv/lustre/decompose.hpp"
#include "hrmv/lustre/elaborate.hpp"
#include "hrmv/lustre/parser.hpp"
#include "hrmv/lustre/typecheck.hpp"

namespace hrmv {

using Verdict = mc::CheckResult::Verdict;
using nlohmann::json;

lustre::Program load_program(const std::string& path)
{
  lustre::Program p = lustre::parse_file(path);
  lustre::typecheck(p);
  return p;
}

std::string resolve_main(const lustre::Program& p, const std::string& requested)
{
  if (requested.empty()) return lustre::default_main(p);
  if (!p.find(requested)) throw Error("unknown main node '" + requested + "'");
  return requested;
}

Verdict Report::verdict() const
{
  bool unknown = false;
  for (const auto& o : obligations) {
    if (!o.checked) continue;
    if (o.result.verdict == Verdict::Falsified) return Verdict::Falsified;
    if (o.result.verdict == Verdict::Unknown) unknown = true;
  }
  return unknown ? Verdict::Unknown : Verdict::Valid;
}

int Report::exit_code() const
{
  switch (verdict()) {
  case Verdict::Valid: return kExitValid;
  case Verdict::Falsified: return kExitFalsified;
  case Verdict::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

namespace {

json valuation_json(const Valuation& v)
{
  json j = json::object();
  for (const auto& [k, x] : v) j[k] = x.to_string();
  return j;
}

json obligation_json(const ObligationReport& o)
{
  json j{{"label", o.label},
         {"node", o.node},
         {"kind", o.kind},
         {"instances", o.instances},
         {"assumes", o.assumes},
         {"guarantees", o.guarantees},
         {"checked", o.checked}};
  if (!o.note.empty()) j["note"] = o.note;
  if (!o.checked) return j;
  const auto& r = o.result;
  j["verdict"] = std::string(mc::verdict_name(r.verdict));
  j["method"] = r.method;
  j["k"] = r.k;
  j["seconds"] = r.seconds;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (!r.lemmas.empty()) j["lemmas"] = r.lemmas;
  if (r.cex) {
    json rounds = json::array();
    for (const auto& round : r.cex->trace)
      rounds.push_back({{"inputs", valuation_json(round.inputs)}, {"outputs", valuation_json(round.outputs)}});
    json frames = json::array();
    for (std::size_t i = 0; i < r.cex->trace.size(); ++i) frames.push_back(valuation_json(r.cex->frames[i]));
    j["counterexample"] = {{"initial_state", valuation_json(r.cex->initial)}, {"rounds", rounds}, {"frames", frames}};
  }
  return j;
}

} // namespace

std::string Report::to_json() const
{
  json j{{"schema", "hrmv-report/1"},
         {"command", command},
         {"file", file},
         {"main", main},
         {"verdict", std::string(mc::verdict_name(verdict()))},
         {"exit_code", exit_code()},
         {"guarantees", guarantees},
         {"dedup", {{"enabled", dedup}, {"instances", instances}, {"checked", solver_checked}}},
         {"notes", notes}};
  j["obligations"] = json::array();
  for (const auto& o : obligations) j["obligations"].push_back(obligation_json(o));
  return j.dump(2) + "\n";
}

std::string Report::to_text() const
{
  std::ostringstream out;
  out << command << " " << (file.empty() ? "<input>" : file) << " (main " << main << ")\n";
  for (const auto& n : notes) out << "  note: " << n << "\n";
  for (const auto& o : obligations) {
    out << "  " << o.label << " [" << o.node << "] ";
    if (!o.checked) {
      out << "skipped" << (o.note.empty() ? "" : ": " + o.note) << "\n";
      continue;
    }
    const auto& r = o.result;
    out << mc::verdict_name(r.verdict);
    if (r.verdict != Verdict::Unknown) out << " (" << r.method << ", k=" << r.k << ")";
    out << " " << o.guarantees << " guarantee(s), " << r.seconds << " s";
    if (!r.reason.empty()) out << ", " << r.reason;
    if (!o.note.empty()) out << ", " << o.note;
    out << "\n";
    if (r.cex) {
      for (std::size_t i = 0; i < r.cex->trace.size(); ++i) {
        Valuation all = r.cex->trace[i].inputs;
        all.insert(r.cex->trace[i].outputs.begin(), r.cex->trace[i].outputs.end());
        if (o.kind == "abstract")
          for (const auto& [name, v] : r.cex->frames[i])
            if (name.find('$') == std::string::npos) all[name] = v;
        out << "    round " << i << ": " << valuation_to_string(all) << "\n";
      }
    }
  }
  out << "verdict: " << mc::verdict_name(verdict());
  if (command == "compose")
    out << " (" << guarantees << " guarantees, " << solver_checked << " of " << instances
        << " obligations checked)";
  out << "\n";
  return out.str();
}

namespace {

ObligationReport node_obligation(const lustre::Program& p, const std::string& node, const std::string& label,
                                 const std::string& kind)
{
  ObligationReport o;
  o.label = label;
  o.node = node;
  o.kind = kind;
  o.instances = {node};
  const lustre::Node& n = *p.find(node);
  if (n.contract) {
    o.assumes = n.contract->assumes.size();
    o.guarantees = n.contract->guarantees.size();
  }
  return o;
}

mc::CheckResult check_node(const lustre::Program& p, const std::string& node, const DriverOptions& opt)
{
  lustre::Elaboration el = lustre::elaborate(p, lustre::instantiate(p, node));
  Module flat = flatten(el.hier);
  mc::TransitionSystem ts = mc::encode(flat, el.contract, node);
  return mc::check(ts, opt.engine);
}

/// Runs the pending obligations on a bounded pool.
void run_pool(std::vector<std::function<void()>>& jobs, std::size_t workers)
{
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency() / 2);
  workers = std::min(workers, jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < jobs.size();) {
          try {
            jobs[i]();
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

} // namespace

Report cmd_check(const lustre::Program& p, const DriverOptions& opt, const std::string& file)
{
  Report r;
  r.command = "check";
  r.file = file;
  r.main = resolve_main(p, opt.main);
  ObligationReport o = node_obligation(p, r.main, "goal", "goal");
  if (!p.find(r.main)->contract) r.notes.push_back("main node has no contract; checking true");
  o.result = check_node(p, r.main, opt);
  o.checked = true;
  r.instances = r.solver_checked = 1;
  r.guarantees = o.guarantees;
  r.obligations.push_back(std::move(o));
  return r;
}

Report cmd_modular(const lustre::Program& p, const DriverOptions& opt, const std::string& file)
{
  Report r;
  r.command = "modular";
  r.file = file;
  r.main = resolve_main(p, opt.main);
  std::vector<std::function<void()>> jobs;
  for (const auto& n : p.nodes) {
    r.obligations.push_back(node_obligation(p, n.name, "node:" + n.name, "node"));
    if (!n.contract) r.obligations.back().note = "no contract";
  }
  for (auto& o : r.obligations) {
    if (!p.find(o.node)->contract) continue;
    o.checked = true;
    ++r.solver_checked;
    r.guarantees += o.guarantees;
    jobs.push_back([&p, &o, &opt] { o.result = check_node(p, o.node, opt); });
  }
  r.instances = r.solver_checked;
  run_pool(jobs, opt.workers);
  return r;
}

Report cmd_abstract(const lustre::Program& p, const DriverOptions& opt, const std::string& file)
{
  Report r;
  r.command = "abstract";
  r.file = file;
  r.main = resolve_main(p, opt.main);
  lustre::Elaboration el = lustre::elaborate(p, lustre::instantiate(p, r.main));
  std::map<std::string, Contract> contracts;
  for (std::size_t j = 0; j < el.children.size(); ++j) {
    if (el.children[j].has_contract)
      contracts[el.hier.bindings[j].instance] = el.children[j].contract;
    else
      r.notes.push_back("instance " + el.hier.bindings[j].instance + " has no contract and is kept concrete");
  }
  Module subject = contracts.empty() ? flatten(el.hier) : abstract_submodules(el.hier, contracts);
  ObligationReport o = node_obligation(p, r.main, "goal", contracts.empty() ? "goal" : "abstract");
  o.result = mc::check(mc::encode(subject, el.contract, r.main), opt.engine);
  o.checked = true;
  if (o.result.verdict == Verdict::Falsified && !contracts.empty()) o.note = "possibly spurious (abstraction)";
  r.instances = r.solver_checked = 1;
  r.guarantees = o.guarantees;
  r.obligations.push_back(std::move(o));
  return r;
}

Report cmd_compose(const lustre::Program& p, const DriverOptions& opt, const std::string& file)
{
  Report r;
  r.command = "compose";
  r.file = file;
  r.main = resolve_main(p, opt.main);
  r.dedup = opt.dedup;
  const lustre::DecomposedProgram d = lustre::decompose_program(p, r.main);

  for (const auto& e : d.manifest) {
    const std::string kind = e.adapter ? "adapter" : "leaf";
    if (!e.has_contract) {
      ObligationReport o = node_obligation(d.program, e.node, kind + ":" + e.node, kind);
      o.instances = e.instances;
      o.note = "no contract";
      r.obligations.push_back(std::move(o));
      continue;
    }
    r.guarantees += e.guarantees;
    r.instances += e.instances.size();
    if (opt.dedup) {
      ObligationReport o = node_obligation(d.program, e.node, kind + ":" + e.node, kind);
      o.instances = e.instances;
      o.checked = true;
      if (e.instances.size() > 1)
        o.note = "covers " + std::to_string(e.instances.size()) + " instances of the same node";
      r.obligations.push_back(std::move(o));
    } else {
      for (const auto& inst : e.instances) {
        ObligationReport o = node_obligation(d.program, e.node, kind + ":" + inst, kind);
        o.instances = {inst};
        o.checked = true;
        r.obligations.push_back(std::move(o));
      }
    }
  }
  std::vector<std::function<void()>> jobs;
  for (auto& o : r.obligations) {
    if (!o.checked) continue;
    ++r.solver_checked;
    jobs.push_back([&d, &o, &opt] { o.result = check_node(d.program, o.node, opt); });
  }
  run_pool(jobs, opt.workers);
  return r;
}

DecomposeOutput cmd_decompose(const lustre::Program& p, const std::string& main)
{
  const lustre::DecomposedProgram d = lustre::decompose_program(p, resolve_main(p, main));
  return {lustre::pretty_print(d.program), d.manifest_json()};
}

std::vector<Valuation> parse_inputs(const lustre::Program& p, const std::string& main, const std::string& text)
{
  const lustre::Node& n = *p.find(resolve_main(p, main));
  std::vector<Valuation> rounds;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';
    std::istringstream tokens(line);
    std::vector<std::string> toks;
    for (std::string t; tokens >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    Valuation v;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      std::string name, value;
      if (auto eq = toks[i].find('='); eq != std::string::npos) {
        name = toks[i].substr(0, eq);
        value = toks[i].substr(eq + 1);
      } else {
        if (i >= n.inputs.size()) throw Error("line " + std::to_string(lineno) + ": too many values");
        name = n.inputs[i].name;
        value = toks[i];
      }
      auto it = std::find_if(n.inputs.begin(), n.inputs.end(),
                             [&](const lustre::Param& prm) { return prm.name == name; });
      if (it == n.inputs.end()) throw Error("line " + std::to_string(lineno) + ": " + name + " is not an input");
      v[name] = Value::parse(value, it->sort);
    }
    for (const auto& prm : n.inputs)
      if (!v.count(prm.name)) throw Error("line " + std::to_string(lineno) + ": no value for " + prm.name);
    rounds.push_back(std::move(v));
  }
  return rounds;
}

std::string cmd_simulate(const lustre::Program& p, const std::string& main, const std::string& inputs_text,
                         long depth)
{
  const std::string m = resolve_main(p, main);
  std::vector<Valuation> rounds = parse_inputs(p, m, inputs_text);
  if (depth >= 0) {
    if (static_cast<std::size_t>(depth) > rounds.size())
      throw Error("depth " + std::to_string(depth) + " exceeds the " + std::to_string(rounds.size()) +
                  " input rounds");
    rounds.resize(static_cast<std::size_t>(depth));
  }
  Module flat = flatten(lustre::elaborate(p, lustre::instantiate(p, m)).hier);
  DomainBounds bounds;
  bounds.clamp_ints = false;
  Run run = simulate(flat, rounds, bounds);
  std::ostringstream out;
  for (std::size_t i = 0; i < run.trace.size(); ++i)
    out << i << ": " << valuation_to_string(run.trace[i].inputs) << " -> "
        << valuation_to_string(run.trace[i].outputs) << "\n";
  return out.str();
}

std::string cmd_graph(const lustre::Program& p, const std::string& node)
{
  const std::string m = resolve_main(p, node);
  lustre::Elaboration el = lustre::elaborate(p, lustre::instantiate(p, m));
  return el.hier.module.react.to_dot(m, binding_clusters(el.hier));
}

} // namespace hrmv
