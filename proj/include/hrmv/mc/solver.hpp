#pragma once

#include <chrono>
#include <stop_token>
#include <string>
#include <vector>

namespace hrmv::mc {

struct SolverConfig {
  std::string path;
  std::vector<std::string> args;
};

/// `explicit_path`, else $HRMV_SOLVER, else `z3` on PATH. Adds the
/// command-line switches known for z3 and cvc5.
SolverConfig resolve_solver(const std::string& explicit_path = "");

enum class SatResult { Sat, Unsat, Unknown };

struct SolveOutcome {
  SatResult result = SatResult::Unknown;
  std::string model;   // raw `(get-model)` answer when sat
  std::string reason;  // why the answer is unknown
};

using Clock = std::chrono::steady_clock;

/// Runs `script` (ending in `(check-sat)`) in a fresh solver process and
/// fetches the model on sat. The process is killed at `deadline` or when
/// `stop` is requested. Throws Error when the solver cannot be started or
/// answers with an error.
SolveOutcome run_query(const SolverConfig& cfg, const std::string& script, Clock::time_point deadline,
                       std::stop_token stop = {});

} // namespace hrmv::mc
