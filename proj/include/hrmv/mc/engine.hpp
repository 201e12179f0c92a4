#pragma once

#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "hrmv/mc/solver.hpp"
#include "hrmv/mc/transition_system.hpp"

namespace hrmv::mc {

struct EngineOptions {
  std::string solver;  // empty: $HRMV_SOLVER or z3
  std::size_t max_k = 40;
  std::size_t bmc_bound = 20;
  double budget_secs = 600;
  std::string dump_smt_dir;  // empty: no dump
};

/// Concrete run of the encoded system: the state before round 0 and the
/// full valuation of every frame.
struct Counterexample {
  Valuation initial;
  std::vector<Valuation> frames;
  Trace trace;
};

struct CheckResult {
  enum class Verdict { Valid, Falsified, Unknown };
  Verdict verdict = Verdict::Unknown;
  std::string method;  // "bmc", "k-induction" or empty
  std::size_t k = 0;
  std::optional<Counterexample> cex;
  std::vector<std::string> lemmas;  // history bits proven alongside the properties
  std::string reason;
  double seconds = 0;
};

std::string_view verdict_name(CheckResult::Verdict v);

CheckResult bmc(const TransitionSystem& ts, const EngineOptions& opt, std::stop_token stop = {});
CheckResult kinduction(const TransitionSystem& ts, const EngineOptions& opt, std::stop_token stop = {});
/// Runs both engines concurrently; the first conclusive answer wins.
CheckResult check(const TransitionSystem& ts, const EngineOptions& opt);

/// Reads a `(get-model)` answer into a counterexample of k+1 rounds.
Counterexample parse_cex(const std::string& model, const TransitionSystem& ts, std::size_t k);

/// Replays the counterexample through the module semantics; returns an
/// empty string when it reproduces a property violation in its last round,
/// otherwise the reason it does not.
std::string replay(const TransitionSystem& ts, const Counterexample& cex);

} // namespace hrmv::mc
