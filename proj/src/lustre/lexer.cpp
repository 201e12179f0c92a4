#include <cctype>
#include <set>

#include "hrmv/lustre/parser.hpp"

namespace hrmv::lustre {

ParseError::ParseError(Span span, const std::string& msg, std::vector<std::string> expected)
    : SourceError(span, [&] {
        std::string m = msg;
        if (!expected.empty()) {
          m += " (expected";
          for (std::size_t i = 0; i < expected.size(); ++i) m += (i ? ", " : " ") + expected[i];
          m += ")";
        }
        return m;
      }()),
      expected_(std::move(expected))
{
}

namespace {

const std::set<std::string>& keywords()
{
  static const std::set<std::string> k{"node", "returns", "var",  "let",   "tel",  "if",
                                       "then", "else",    "pre",  "and",   "or",   "xor",
                                       "not",  "true",    "false", "bool", "int",  "real",
                                       "assume", "guarantee"};
  return k;
}

} // namespace

std::vector<Token> lex(std::string_view text)
{
  std::vector<Token> out;
  std::size_t pos = 0;
  int line = 1, col = 1;
  bool in_contract = false;
  Span contract_open;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && pos < text.size(); ++k, ++pos) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view s) { return text.substr(pos, s.size()) == s; };

  while (pos < text.size()) {
    const char c = text[pos];
    const Span here{line, col};
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (starts("--")) {
      while (pos < text.size() && text[pos] != '\n') advance(1);
      continue;
    }
    if (starts("(*@contract")) {
      if (in_contract) throw ParseError(here, "nested contract block");
      in_contract = true;
      contract_open = here;
      out.push_back({Tok::ContractOpen, "(*@contract", here});
      advance(11);
      continue;
    }
    if (starts("*)")) {
      if (!in_contract) throw ParseError(here, "'*)' outside a comment");
      in_contract = false;
      out.push_back({Tok::ContractClose, "*)", here});
      advance(2);
      continue;
    }
    if (starts("(*") || starts("/*")) {
      const std::string_view close = starts("(*") ? "*)" : "*/";
      advance(2);
      while (pos < text.size() && !starts(close)) advance(1);
      if (pos >= text.size()) throw ParseError(here, "unterminated comment");
      advance(2);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos;
      while (end < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
        ++end;
      std::string word(text.substr(pos, end - pos));
      out.push_back({keywords().count(word) ? Tok::Keyword : Tok::Ident, word, here});
      advance(end - pos);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      bool real = false;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      if (end + 1 < text.size() && text[end] == '.' &&
          std::isdigit(static_cast<unsigned char>(text[end + 1]))) {
        real = true;
        ++end;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      } else if (end < text.size() && text[end] == '.') {
        real = true;
        ++end;
      }
      if (end < text.size() && (text[end] == 'e' || text[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < text.size() && (text[e] == '+' || text[e] == '-')) ++e;
        if (e < text.size() && std::isdigit(static_cast<unsigned char>(text[e]))) {
          real = true;
          end = e;
          while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
        }
      }
      out.push_back({real ? Tok::RealLit : Tok::IntLit, std::string(text.substr(pos, end - pos)), here});
      advance(end - pos);
      continue;
    }
    static const char* symbols[] = {"->", "=>", "<>", "<=", ">=", "(", ")", ";", ":", ",",
                                    "=",  "<",  ">",  "+",  "-",  "*", "/"};
    bool matched = false;
    for (const char* s : symbols)
      if (starts(s)) {
        out.push_back({Tok::Symbol, s, here});
        advance(std::string_view(s).size());
        matched = true;
        break;
      }
    if (!matched) throw ParseError(here, std::string("unexpected character '") + c + "'");
  }
  if (in_contract) throw ParseError(contract_open, "contract block is never closed");
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

} // namespace hrmv::lustre
