#pragma once

#include <functional>
#include <map>
#include <string>

#include "hrmv/lustre/ast.hpp"

namespace hrmv::lustre {

/// Checks sorts, definitions, call arities and the restrictions of the
/// supported subset. Throws SourceError on the first problem.
void typecheck(const Program& p);

/// Sort of an expression inside node `n`; calls are rejected here.
Sort infer_sort(const Program& p, const Node& n, const LExprPtr& e);

/// Converts a state-free expression, renaming variables with `name`.
Expr to_expr(const Node& n, const LExprPtr& e,
             const std::function<std::string(const std::string&)>& name);

/// Nodes reachable from `main` through calls, callees first.
std::vector<std::string> reachable_nodes(const Program& p, const std::string& main);

/// `--main` default: the last node of the file.
std::string default_main(const Program& p);

} // namespace hrmv::lustre
