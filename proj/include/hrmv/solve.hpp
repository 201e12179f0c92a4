#pragma once

#include <functional>
#include <vector>

#include "hrmv/hypergraph.hpp"

namespace hrmv {

struct SolveOptions {
  /// Candidate values for a nondeterministically chosen write.
  std::function<std::vector<Value>(const std::string& name, Sort sort)> domain;
  /// Optional veto on computed values; a vetoed branch is dropped.
  std::function<bool(const std::string& name, const Value& v)> admissible;
};

/// Enumerates every valuation of the acyclic graph `g` that extends `seed`
/// and satisfies all tasks, visiting edges in level order. Initial vertices
/// must be bound by `seed`; seeded non-initial vertices act as constraints
/// on the tasks that write them. `visit` returns false to stop early, in
/// which case solve_graph returns false.
bool solve_graph(const Hypergraph& g, const Valuation& seed, const SolveOptions& opts,
                 const std::function<bool(const Valuation&)>& visit);

} // namespace hrmv
