#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hrmv/driver.hpp"

namespace {

std::string read_text(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw hrmv::Error("cannot read file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text)
{
  std::ofstream out(path);
  if (!out) throw hrmv::Error("cannot write file " + path);
  out << text;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Hierarchical reactive module verifier for contract-annotated Lustre"};
  app.require_subcommand(1);

  std::string file, main_node, json_path, inputs_path, out_path, manifest_path;
  hrmv::DriverOptions opt;
  long depth = -1;
  bool no_dedup = false;

  auto add_verify = [&](CLI::App* sub) {
    sub->add_option("file", file, "Lustre source")->required();
    sub->add_option("--main", main_node, "Main node (default: last node)");
    sub->add_option("--solver", opt.engine.solver, "SMT solver executable (default: $HRMV_SOLVER or z3)");
    sub->add_option("--max-k", opt.engine.max_k, "k-induction bound")->capture_default_str();
    sub->add_option("--bmc-bound", opt.engine.bmc_bound, "BMC unrolling bound")->capture_default_str();
    sub->add_option("--budget-secs", opt.engine.budget_secs, "Time budget per obligation")->capture_default_str();
    sub->add_option("--json", json_path, "Write the JSON report to this path");
    sub->add_option("--dump-smt", opt.engine.dump_smt_dir, "Directory for emitted SMT-LIB scripts");
    sub->add_option("--workers", opt.workers, "Parallel obligations (0: auto)");
  };

  auto* check = app.add_subcommand("check", "Monolithic check of the main node contract");
  add_verify(check);
  auto* modular = app.add_subcommand("modular", "Check every node against its own contract");
  add_verify(modular);
  auto* abstract = app.add_subcommand("abstract", "Check the main contract with children replaced by contracts");
  add_verify(abstract);
  auto* compose = app.add_subcommand("compose", "Decompose into adapters and check all obligations");
  add_verify(compose);
  compose->add_flag("--no-dedup", no_dedup, "Check one obligation per instance");

  auto* decompose = app.add_subcommand("decompose", "Emit the decomposed program and its manifest");
  decompose->add_option("file", file, "Lustre source")->required();
  decompose->add_option("--main", main_node, "Main node (default: last node)");
  decompose->add_option("-o,--output", out_path, "Output .lus path (default: stdout)");
  decompose->add_option("--manifest", manifest_path, "Manifest path (default: <output>.json)");

  auto* sim = app.add_subcommand("simulate", "Run the main node on an input file");
  sim->add_option("file", file, "Lustre source")->required();
  sim->add_option("inputs", inputs_path, "Input rounds, one per line")->required();
  sim->add_option("--main", main_node, "Main node (default: last node)");
  sim->add_option("--depth", depth, "Number of rounds (default: all)");

  auto* graph = app.add_subcommand("graph", "Print the task graph of a node as DOT");
  graph->add_option("file", file, "Lustre source")->required();
  graph->add_option("--main,--node", main_node, "Node (default: last node)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : hrmv::kExitInputError;
  }
  opt.main = main_node;
  opt.dedup = !no_dedup;

  std::signal(SIGINT, [](int) { std::_Exit(130); });

  try {
    hrmv::lustre::Program p = hrmv::load_program(file);
    if (app.got_subcommand(decompose)) {
      auto out = hrmv::cmd_decompose(p, main_node);
      if (out_path.empty()) {
        std::cout << out.lus;
        if (!manifest_path.empty()) write_text(manifest_path, out.manifest);
      } else {
        write_text(out_path, out.lus);
        write_text(manifest_path.empty() ? out_path + ".json" : manifest_path, out.manifest);
      }
      return hrmv::kExitValid;
    }
    if (app.got_subcommand(sim)) {
      std::cout << hrmv::cmd_simulate(p, main_node, read_text(inputs_path), depth);
      return hrmv::kExitValid;
    }
    if (app.got_subcommand(graph)) {
      std::cout << hrmv::cmd_graph(p, main_node);
      return hrmv::kExitValid;
    }
    hrmv::Report r;
    if (app.got_subcommand(check)) r = hrmv::cmd_check(p, opt, file);
    else if (app.got_subcommand(modular)) r = hrmv::cmd_modular(p, opt, file);
    else if (app.got_subcommand(abstract)) r = hrmv::cmd_abstract(p, opt, file);
    else r = hrmv::cmd_compose(p, opt, file);
    std::cerr << r.to_text();
    if (!json_path.empty()) write_text(json_path, r.to_json());
    return r.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hrmv::kExitInputError;
  }
}
