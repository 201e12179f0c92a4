#pragma once

#include <string>
#include <vector>

#include "hrmv/hierarchy.hpp"

namespace hrmv::mc {

struct NamedFormula {
  std::string name;
  Expr formula;
};

/// Symbolic encoding of a module against a contract. Formulas range over
/// frame variables (unprimed vertex names) and primed state names, which
/// refer to the state of the following frame.
struct TransitionSystem {
  std::string name;
  Module subject;
  std::vector<VarId> states;
  std::vector<VarId> inputs;
  std::vector<VarId> frame_vars;  // every unprimed vertex and interface variable
  std::vector<Expr> init;
  std::vector<Expr> trans;
  std::vector<NamedFormula> assumes;
  std::vector<NamedFormula> props;
  /// Boolean history bits that start true; tried as strengthening lemmas.
  std::vector<std::string> lemma_candidates;
  /// React has a cycle, as abstractions of circular systems do.
  bool cyclic = false;
};

/// Throws Error on nonlinear arithmetic or an invalid subject. A cyclic
/// React is accepted; the tasks are then plain constraints.
TransitionSystem encode(const Module& subject, const Contract& c, const std::string& name = "");

enum class Query { Bmc, Base, Step };
std::string_view query_name(Query q);

/// SMT-LIB 2.6 script for frames 0..k. Bmc asks for a run violating the
/// properties at frame k. Base additionally requires properties and
/// `lemmas` at frames before k and negates their conjunction at k. Step is
/// Base without the initial condition.
std::string emit_smt(const TransitionSystem& ts, std::size_t k, Query q,
                     const std::vector<std::string>& lemmas = {});

/// `|v@i|`
std::string frame_symbol(const std::string& v, std::size_t i);
/// Rewrites a formula to frame `i`: `v` -> `v@i`, `s'` -> `s@(i+1)`.
std::string frame_smt(const Expr& e, std::size_t i);

} // namespace hrmv::mc
