#include <fstream>
#include <sstream>

#include "hrmv/lustre/parser.hpp"

namespace hrmv::lustre {

namespace {

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program()
  {
    Program p;
    while (!at_end()) p.nodes.push_back(node());
    return p;
  }

  LExprPtr lone_expression()
  {
    auto e = expr();
    if (!at_end()) fail({"end of input"});
    return e;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const
  {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(Tok kind, std::string_view text = {}) const
  {
    return peek().kind == kind && (text.empty() || peek().text == text);
  }
  bool is_kw(std::string_view k) const { return is(Tok::Keyword, k); }
  bool is_sym(std::string_view s) const { return is(Tok::Symbol, s); }

  [[noreturn]] void fail(std::vector<std::string> expected) const
  {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.span, "unexpected " + found, std::move(expected));
  }

  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  Token expect_sym(std::string_view s)
  {
    if (!is_sym(s)) fail({"'" + std::string(s) + "'"});
    return take();
  }
  Token expect_kw(std::string_view k)
  {
    if (!is_kw(k)) fail({"'" + std::string(k) + "'"});
    return take();
  }
  Token expect_ident()
  {
    if (!is(Tok::Ident)) fail({"identifier"});
    return take();
  }
  bool accept_sym(std::string_view s)
  {
    if (!is_sym(s)) return false;
    take();
    return true;
  }

  Sort type()
  {
    for (const char* k : {"bool", "int", "real"})
      if (is_kw(k)) {
        take();
        return sort_from_name(k);
      }
    fail({"'bool'", "'int'", "'real'"});
  }

  // ident (',' ident)* ':' type
  void group(std::vector<Param>& out)
  {
    std::vector<Token> names{expect_ident()};
    while (accept_sym(",")) names.push_back(expect_ident());
    expect_sym(":");
    Sort s = type();
    for (auto& n : names) out.push_back({n.text, s, n.span});
  }

  std::vector<Param> params()
  {
    std::vector<Param> out;
    expect_sym("(");
    if (accept_sym(")")) return out;
    group(out);
    while (accept_sym(";")) {
      if (is_sym(")")) break;
      group(out);
    }
    expect_sym(")");
    return out;
  }

  ContractSpec contract()
  {
    ContractSpec c;
    c.span = take().span;
    while (!is(Tok::ContractClose)) {
      if (is_kw("assume")) {
        take();
        c.assumes.push_back(expr());
      } else if (is_kw("guarantee")) {
        take();
        c.guarantees.push_back(expr());
      } else {
        fail({"'assume'", "'guarantee'", "'*)'"});
      }
      expect_sym(";");
    }
    take();
    return c;
  }

  Node node()
  {
    Node n;
    n.span = expect_kw("node").span;
    n.name = expect_ident().text;
    n.inputs = params();
    expect_kw("returns");
    n.outputs = params();
    accept_sym(";");
    if (is(Tok::ContractOpen)) n.contract = contract();
    if (is_kw("var")) {
      take();
      do {
        group(n.locals);
        expect_sym(";");
      } while (is(Tok::Ident));
    }
    expect_kw("let");
    while (!is_kw("tel")) n.equations.push_back(equation());
    take();
    accept_sym(";");
    return n;
  }

  Equation equation()
  {
    Equation eq;
    eq.span = peek().span;
    const bool paren = accept_sym("(");
    eq.lhs.push_back(expect_ident().text);
    while (accept_sym(",")) eq.lhs.push_back(expect_ident().text);
    if (paren) expect_sym(")");
    expect_sym("=");
    eq.rhs = expr();
    expect_sym(";");
    return eq;
  }

  LExprPtr expr()
  {
    if (is_kw("if")) return ite();
    return arrow();
  }

  LExprPtr ite()
  {
    Span s = take().span;
    auto c = expr();
    expect_kw("then");
    auto t = expr();
    expect_kw("else");
    auto e = expr();
    return LExpr::ite(c, t, e, s);
  }

  LExprPtr arrow()
  {
    auto lhs = implies();
    if (is_sym("->")) {
      Span s = take().span;
      return LExpr::arrow(lhs, expr(), s);
    }
    return lhs;
  }

  LExprPtr implies()
  {
    auto lhs = disjunction();
    if (is_sym("=>")) {
      Span s = take().span;
      auto rhs = is_kw("if") ? ite() : implies();
      return LExpr::binary(BinaryOp::Implies, lhs, rhs, s);
    }
    return lhs;
  }

  LExprPtr disjunction()
  {
    auto lhs = conjunction_();
    while (is_kw("or") || is_kw("xor")) {
      Token t = take();
      lhs = LExpr::binary(t.text == "or" ? BinaryOp::Or : BinaryOp::Xor, lhs, conjunction_(), t.span);
    }
    return lhs;
  }

  LExprPtr conjunction_()
  {
    auto lhs = comparison();
    while (is_kw("and")) {
      Span s = take().span;
      lhs = LExpr::binary(BinaryOp::And, lhs, comparison(), s);
    }
    return lhs;
  }

  LExprPtr comparison()
  {
    auto lhs = negation();
    static const std::pair<const char*, BinaryOp> ops[] = {
        {"=", BinaryOp::Eq}, {"<>", BinaryOp::Neq}, {"<", BinaryOp::Lt},
        {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}};
    for (const auto& [text, op] : ops)
      if (is_sym(text)) {
        Span s = take().span;
        return LExpr::binary(op, lhs, negation(), s);
      }
    return lhs;
  }

  LExprPtr negation()
  {
    if (is_kw("not")) {
      Span s = take().span;
      return LExpr::unary(UnaryOp::Not, negation(), s);
    }
    return additive();
  }

  LExprPtr additive()
  {
    auto lhs = multiplicative();
    while (is_sym("+") || is_sym("-")) {
      Token t = take();
      lhs = LExpr::binary(t.text == "+" ? BinaryOp::Add : BinaryOp::Sub, lhs, multiplicative(), t.span);
    }
    return lhs;
  }

  LExprPtr multiplicative()
  {
    auto lhs = unary();
    while (is_sym("*") || is_sym("/")) {
      Token t = take();
      lhs = LExpr::binary(t.text == "*" ? BinaryOp::Mul : BinaryOp::Div, lhs, unary(), t.span);
    }
    return lhs;
  }

  LExprPtr unary()
  {
    if (is_sym("-")) {
      Span s = take().span;
      return LExpr::unary(UnaryOp::Neg, unary(), s);
    }
    if (is_kw("pre")) {
      Span s = take().span;
      return LExpr::pre(unary(), s);
    }
    return primary();
  }

  LExprPtr primary()
  {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::IntLit: {
      Token k = take();
      return LExpr::literal(Value::parse(k.text, Sort::Int), k.span);
    }
    case Tok::RealLit: {
      Token k = take();
      return LExpr::literal(Value::parse(k.text, Sort::Real), k.span);
    }
    case Tok::Keyword:
      if (t.text == "true" || t.text == "false") {
        Token k = take();
        return LExpr::literal(Value::boolean(k.text == "true"), k.span);
      }
      if (t.text == "if") return ite();
      break;
    case Tok::Ident: {
      Token k = take();
      if (!is_sym("(")) return LExpr::var(k.text, k.span);
      take();
      std::vector<LExprPtr> args;
      if (!is_sym(")")) {
        args.push_back(expr());
        while (accept_sym(",")) args.push_back(expr());
      }
      expect_sym(")");
      return LExpr::call(k.text, std::move(args), k.span);
    }
    case Tok::Symbol:
      if (t.text == "(") {
        take();
        auto e = expr();
        expect_sym(")");
        return e;
      }
      break;
    default: break;
    }
    fail({"expression"});
  }
};

} // namespace

Program parse(std::string_view text) { return Parser(lex(text)).program(); }

LExprPtr parse_expression(std::string_view text) { return Parser(lex(text)).lone_expression(); }

Program parse_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

} // namespace hrmv::lustre
