#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hrmv/hypergraph.hpp"

namespace hrmv {

/// (I, O, S, Init, React). Init is a product of per-variable constraints:
/// a state listed in `init` starts at that value, any other state starts
/// anywhere in its domain.
struct Module {
  std::string name;
  std::vector<VarId> inputs;
  std::vector<VarId> outputs;
  std::vector<VarId> states;
  std::map<std::string, Value> init;
  Hypergraph react;

  std::set<std::string> input_names() const;
  std::set<std::string> output_names() const;
  std::set<std::string> state_names() const;
  bool is_input(const std::string& v) const;
  bool is_output(const std::string& v) const;
  bool is_state(const std::string& v) const;
  /// Vertices of React that are not interface, state or primed state.
  std::set<std::string> local_names() const;

  /// Module well-formedness: disjointness, state placement, React is a TG.
  ValidationReport validate() const;
  void check() const;  // throws Error with the report when invalid
};

class CompositionError : public Error {
public:
  enum class Kind { Outputs, States, WriteConflict, Cycle };
  CompositionError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// The empty module with the single trace of unit rounds.
Module top_module();

struct PropertyFormula {
  enum class Kind { Always, HistImplies };
  Kind kind = Kind::Always;
  Expr p;  // Always: the invariant; HistImplies: the historically-held premise
  Expr q;  // HistImplies: the consequence

  static PropertyFormula always(Expr p);
  static PropertyFormula hist_implies(Expr p, Expr q);
  std::set<std::string> vars() const;
  std::string to_string() const;
};

/// Property module emitting values for `outputs` that satisfy `f`. Other
/// variables of `f` become inputs. `label` names the task (and the history
/// state `<label>.hist` of the Hist form) so several property modules can be
/// composed.
Module property_module(const PropertyFormula& f, const std::vector<VarId>& outputs,
                       const std::string& label = "prop");

/// Parallel composition; throws CompositionError when incompatible.
Module parallel_compose(const Module& m1, const Module& m2);
Module compose_all(const std::vector<Module>& ms);

Module hide(const Module& m, const std::set<std::string>& hidden);

/// Finite domains for the brute-force oracle.
struct DomainBounds {
  long int_min = -4;
  long int_max = 4;
  /// Discard branches that compute an int outside [int_min, int_max].
  bool clamp_ints = true;
  /// Values tried for free reals; no real nondeterminism when empty.
  std::vector<mpq_class> real_samples;
  std::size_t max_nodes = 2'000'000;

  std::vector<Value> values(const std::string& name, Sort sort) const;
};

struct Round {
  Valuation inputs;
  Valuation outputs;
  friend bool operator==(const Round&, const Round&) = default;
  friend auto operator<=>(const Round& a, const Round& b)
  {
    if (auto c = a.inputs <=> b.inputs; c != 0) return c;
    return a.outputs <=> b.outputs;
  }
};
using Trace = std::vector<Round>;

/// One round per line, `var=value` pairs sorted by name.
std::string trace_to_string(const Trace& t);

struct StepResult {
  Valuation outputs;
  Valuation next;  // keyed by unprimed state names
  friend bool operator==(const StepResult&, const StepResult&) = default;
  friend auto operator<=>(const StepResult& a, const StepResult& b)
  {
    if (auto c = a.outputs <=> b.outputs; c != 0) return c;
    return a.next <=> b.next;
  }
};

/// All reactions from state `s` on input `i`. `fixed` pins values of other
/// vertices (typically outputs), turning them into constraints.
std::vector<StepResult> step(const Module& m, const Valuation& s, const Valuation& i,
                             const DomainBounds& bounds, const Valuation& fixed = {});

std::vector<Valuation> initial_states(const Module& m, const DomainBounds& bounds);
std::vector<Valuation> input_valuations(const Module& m, const DomainBounds& bounds);

/// All traces of exactly `depth` rounds.
std::set<Trace> traces(const Module& m, std::size_t depth, const DomainBounds& bounds);
/// Runs the module on a fixed input sequence; the module must be
/// deterministic (one reaction per round).
struct Run {
  std::vector<Valuation> states;  // s(-1), s(0), ...
  Trace trace;
};
Run simulate(const Module& m, const std::vector<Valuation>& inputs, const DomainBounds& bounds);

/// Conditions (i)-(iii) of the implementation relation.
ValidationReport check_static_impl(const Module& m1, const Module& m2);

/// Depth-bounded trace inclusion (condition (iv)) by product exploration.
/// Returns a trace of m1 whose projection is not a trace of m2.
std::optional<Trace> find_refinement_violation(const Module& m1, const Module& m2,
                                               std::size_t depth, const DomainBounds& bounds);
bool bounded_refines(const Module& m1, const Module& m2, std::size_t depth,
                     const DomainBounds& bounds);

/// Same variable sets and identical bounded trace sets.
bool bounded_equivalent(const Module& m1, const Module& m2, std::size_t depth,
                        const DomainBounds& bounds);

} // namespace hrmv
