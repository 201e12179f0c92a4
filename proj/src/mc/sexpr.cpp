#include "hrmv/mc/sexpr.hpp"

#include <cctype>

namespace hrmv::mc {

std::string SExpr::to_string() const
{
  if (is_atom) return atom;
  std::string s = "(";
  for (std::size_t i = 0; i < list.size(); ++i) s += (i ? " " : "") + list[i].to_string();
  return s + ")";
}

namespace {

struct Reader {
  std::string_view text;
  std::size_t pos = 0;

  void skip()
  {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      } else if (text[pos] == ';') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  SExpr read()
  {
    skip();
    if (pos >= text.size()) throw Error("s-expression: unexpected end of input");
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      SExpr e;
      e.is_atom = false;
      for (;;) {
        skip();
        if (pos >= text.size()) throw Error("s-expression: missing ')'");
        if (text[pos] == ')') {
          ++pos;
          return e;
        }
        e.list.push_back(read());
      }
    }
    if (c == ')') throw Error("s-expression: unexpected ')'");
    SExpr e;
    if (c == '|') {
      auto end = text.find('|', pos + 1);
      if (end == std::string_view::npos) throw Error("s-expression: unterminated |symbol|");
      e.atom = std::string(text.substr(pos + 1, end - pos - 1));
      pos = end + 1;
      return e;
    }
    if (c == '"') {
      std::size_t end = pos + 1;
      while (end < text.size()) {
        if (text[end] == '"') {
          if (end + 1 < text.size() && text[end + 1] == '"') {
            end += 2;
            continue;
          }
          break;
        }
        ++end;
      }
      if (end >= text.size()) throw Error("s-expression: unterminated string");
      e.atom = std::string(text.substr(pos, end - pos + 1));
      pos = end + 1;
      return e;
    }
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' &&
           text[pos] != ')')
      ++pos;
    e.atom = std::string(text.substr(start, pos - start));
    return e;
  }
};

mpq_class numeric(const SExpr& e)
{
  if (e.is_atom) {
    if (e.atom.empty() || !(std::isdigit(static_cast<unsigned char>(e.atom[0])) || e.atom[0] == '.'))
      throw Error("not a numeral: " + e.atom);
    return parse_decimal(e.atom);
  }
  if (e.list.size() == 2 && e.list[0].is_atom && e.list[0].atom == "-") return -numeric(e.list[1]);
  if (e.list.size() == 3 && e.list[0].is_atom && e.list[0].atom == "/") {
    mpq_class d = numeric(e.list[2]);
    if (d == 0) throw Error("division by zero in model value");
    mpq_class q = numeric(e.list[1]) / d;
    q.canonicalize();
    return q;
  }
  if (e.list.size() == 2 && e.list[0].is_atom && e.list[0].atom == "to_real") return numeric(e.list[1]);
  throw Error("unsupported model value " + e.to_string());
}

} // namespace

std::vector<SExpr> parse_sexprs(std::string_view text)
{
  Reader r{text};
  std::vector<SExpr> out;
  for (;;) {
    r.skip();
    if (r.pos >= text.size()) break;
    out.push_back(r.read());
  }
  return out;
}

Value sexpr_value(const SExpr& e, Sort sort)
{
  switch (sort) {
  case Sort::Bool:
    if (e.is_atom && e.atom == "true") return Value::boolean(true);
    if (e.is_atom && e.atom == "false") return Value::boolean(false);
    throw Error("not a boolean: " + e.to_string());
  case Sort::Int: {
    mpq_class q = numeric(e);
    if (q.get_den() != 1) throw Error("not an integer: " + e.to_string());
    return Value::integer(q.get_num());
  }
  case Sort::Real: return Value::real(numeric(e));
  case Sort::Unit: return Value::unit();
  }
  throw Error("unknown sort");
}

} // namespace hrmv::mc
