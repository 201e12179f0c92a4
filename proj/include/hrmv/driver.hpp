#pragma once

#include <string>
#include <vector>

#include "hrmv/lustre/ast.hpp"
#include "hrmv/mc/engine.hpp"

namespace hrmv {

enum ExitCode : int { kExitValid = 0, kExitFalsified = 1, kExitUnknown = 2, kExitInputError = 3 };

struct DriverOptions {
  std::string main;  // empty: last node of the file
  mc::EngineOptions engine;
  bool dedup = true;
  std::size_t workers = 0;  // 0: hardware concurrency
};

struct ObligationReport {
  std::string label;
  std::string node;
  std::string kind;  // "goal", "node", "adapter", "leaf", "abstract"
  std::vector<std::string> instances;
  std::size_t assumes = 0;
  std::size_t guarantees = 0;
  bool checked = false;
  std::string note;
  mc::CheckResult result;
};

struct Report {
  std::string command;
  std::string file;
  std::string main;
  std::vector<ObligationReport> obligations;
  bool dedup = true;
  std::size_t instances = 0;  // obligations before deduplication
  std::size_t solver_checked = 0;
  std::size_t guarantees = 0;  // over distinct checked nodes
  std::vector<std::string> notes;

  mc::CheckResult::Verdict verdict() const;
  int exit_code() const;
  std::string to_json() const;
  std::string to_text() const;
};

lustre::Program load_program(const std::string& path);
std::string resolve_main(const lustre::Program& p, const std::string& requested);

Report cmd_check(const lustre::Program& p, const DriverOptions& opt, const std::string& file = "");
Report cmd_modular(const lustre::Program& p, const DriverOptions& opt, const std::string& file = "");
Report cmd_abstract(const lustre::Program& p, const DriverOptions& opt, const std::string& file = "");
Report cmd_compose(const lustre::Program& p, const DriverOptions& opt, const std::string& file = "");

struct DecomposeOutput {
  std::string lus;
  std::string manifest;
};
DecomposeOutput cmd_decompose(const lustre::Program& p, const std::string& main);

/// Input rounds, one per line: `name=value` tokens or values in input order.
std::vector<Valuation> parse_inputs(const lustre::Program& p, const std::string& main, const std::string& text);
/// Runs `depth` rounds (all rounds when depth < 0).
std::string cmd_simulate(const lustre::Program& p, const std::string& main, const std::string& inputs_text,
                         long depth = -1);
std::string cmd_graph(const lustre::Program& p, const std::string& node);

} // namespace hrmv
