#pragma once

#include <string>
#include <vector>

#include "hrmv/hierarchy.hpp"
#include "hrmv/lustre/ast.hpp"

namespace hrmv::lustre {

/// One node instance per call site. The root has an empty path; a child
/// called as the k-th call of node N inside its parent is named `N<k>` and
/// its path is the parent path joined with `.`.
struct InstanceTree {
  std::string path;
  std::string instance;
  const Node* node = nullptr;
  std::vector<InstanceTree> children;  // in call order
};

InstanceTree instantiate(const Program& p, const std::string& main);

/// Elaborated instance: the hierarchical module plus the node contract over
/// instance-qualified names.
struct Elaboration {
  std::string path;
  std::string node_name;
  HierarchicalModule hier;
  bool has_contract = false;
  Contract contract;
  std::vector<Elaboration> children;  // aligned with hier.bindings
};

Elaboration elaborate(const Program& p, const InstanceTree& tree);
Elaboration elaborate_main(const Program& p, const std::string& main);

/// Qualified name of variable `v` inside the instance at `path`.
std::string qualify(const std::string& path, const std::string& v);

} // namespace hrmv::lustre
