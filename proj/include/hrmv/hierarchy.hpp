#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hrmv/module.hpp"

namespace hrmv {

struct SubmoduleBinding;

/// A module whose React embeds the React of each child as a subgraph.
/// Children share vertex names with the parent (io_map is the identity
/// after instance prefixing).
struct HierarchicalModule {
  Module module;
  std::vector<SubmoduleBinding> bindings;
};

struct SubmoduleBinding {
  std::string instance;
  HierarchicalModule child;
  std::set<std::string> edge_ids;

  const Module& module() const { return child.module; }
};

/// Assume/guarantee pair of invariants. Empty lists stand for `true`.
struct Contract {
  std::vector<Expr> assumes;
  std::vector<Expr> guarantees;

  Expr assume_formula() const { return conjunction(assumes); }
  Expr guarantee_formula() const { return conjunction(guarantees); }
  std::set<std::string> vars() const;
};

/// Left and right side of `subject || M_a <= M_g` as property modules.
struct GoalModules {
  Module lhs;  // subject || M_a
  Module rhs;  // M_g
};
GoalModules goal_modules(const Module& subject, const Contract& c, const std::string& label = "goal");

struct Obligation {
  std::string label;  // "sub:<instance>" or "adapter"
  Module subject;
  Contract contract;
};

/// Conditions (i)-(iv) per child plus pairwise disjointness of child
/// outputs and states; nested hierarchies are validated recursively.
ValidationReport validate_hierarchy(const HierarchicalModule& h);

Module flatten(const HierarchicalModule& h);
Module derive_adapter(const HierarchicalModule& h);

struct Decomposition {
  std::vector<Module> children;
  Module adapter;
  std::set<std::string> hide_set;
};
Decomposition decompose(const HierarchicalModule& h);
/// hide(children || adapter, hide_set).
Module recompose(const Decomposition& d);

/// Replaces the listed children by Opaque edges encoding
/// Hist(assume) => guarantee with a history bit `<instance>.hist`.
/// The result may have a cyclic React.
Module abstract_submodules(const HierarchicalModule& h, const std::map<std::string, Contract>& contracts);
Module abstract_submodule(const HierarchicalModule& h, std::size_t j, const Contract& c);

/// n+1 obligations: one per child, then the adapter obligation.
std::vector<Obligation> gen_obligations(const HierarchicalModule& h, const Contract& top,
                                        const std::vector<Contract>& subs);

/// Edge ids per child instance, for DOT clusters.
std::map<std::string, std::set<std::string>> binding_clusters(const HierarchicalModule& h);

} // namespace hrmv
