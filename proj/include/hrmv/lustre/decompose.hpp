#pragma once

#include <string>
#include <vector>

#include "hrmv/lustre/ast.hpp"

namespace hrmv::lustre {

/// One node of the decomposed program together with the instances of the
/// original program that it stands for.
struct ManifestEntry {
  std::string node;
  bool adapter = false;
  bool has_contract = false;
  std::size_t assumes = 0;
  std::size_t guarantees = 0;
  std::vector<std::string> instances;  // instance paths; the root is the main node name
};

struct DecomposedProgram {
  std::string main;
  Program program;
  std::vector<ManifestEntry> manifest;  // callees first, main last

  std::string manifest_json() const;
};

/// Rewrites every node reachable from `main` that calls other nodes into an
/// adapter node: call results become inputs, call arguments become outputs,
/// and the contract is extended with the callee contracts over the promoted
/// names. Nodes without calls are copied unchanged.
DecomposedProgram decompose_program(const Program& p, const std::string& main);

/// Promoted parameter name for `param` of call instance `instance`.
std::string promoted_name(const std::string& instance, const std::string& param);

} // namespace hrmv::lustre
