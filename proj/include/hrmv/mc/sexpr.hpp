#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hrmv/value.hpp"

namespace hrmv::mc {

struct SExpr {
  bool is_atom = true;
  std::string atom;  // symbols keep no bars
  std::vector<SExpr> list;

  std::string to_string() const;
};

/// Parses a sequence of s-expressions; throws Error on malformed input.
std::vector<SExpr> parse_sexprs(std::string_view text);

/// Reads an SMT-LIB literal such as `5`, `(- 5)`, `1.5`, `(/ 1.0 3.0)`.
Value sexpr_value(const SExpr& e, Sort sort);

} // namespace hrmv::mc
