#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hrmv/lustre/ast.hpp"

namespace hrmv::lustre {

enum class Tok {
  End,
  Ident,
  IntLit,
  RealLit,
  Keyword,
  Symbol,
  ContractOpen,   // (*@contract
  ContractClose,  // *)
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
};

/// Splits source text into tokens; `--` line comments and ordinary
/// `(* ... *)` block comments are dropped.
std::vector<Token> lex(std::string_view text);

/// Raised on malformed input; carries the set of tokens that would have
/// been accepted.
class ParseError : public SourceError {
public:
  ParseError(Span span, const std::string& msg, std::vector<std::string> expected = {});
  const std::vector<std::string>& expected() const { return expected_; }

private:
  std::vector<std::string> expected_;
};

Program parse(std::string_view text);
Program parse_file(const std::string& path);
LExprPtr parse_expression(std::string_view text);

} // namespace hrmv::lustre
