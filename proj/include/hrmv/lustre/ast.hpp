#pragma once

#include <map>
#include <memory>
#include <set>
#include <optional>
#include <string>
#include <vector>

#include "hrmv/expr.hpp"

namespace hrmv::lustre {

struct Span {
  int line = 0;
  int column = 0;
  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
};

/// Error carrying a source position.
class SourceError : public Error {
public:
  SourceError(Span span, const std::string& msg)
      : Error(span.to_string() + ": " + msg), span_(span) {}
  Span span() const { return span_; }

private:
  Span span_;
};

struct LExpr;
using LExprPtr = std::shared_ptr<const LExpr>;

struct LExpr {
  enum class Kind { Literal, Var, Unary, Binary, Ite, Pre, Arrow, Call };
  Kind kind = Kind::Literal;
  Span span;
  Value value;       // Literal
  std::string name;  // Var, Call (callee)
  UnaryOp uop = UnaryOp::Not;
  BinaryOp bop = BinaryOp::And;
  std::vector<LExprPtr> args;

  static LExprPtr literal(Value v, Span s = {});
  static LExprPtr var(std::string name, Span s = {});
  static LExprPtr unary(UnaryOp op, LExprPtr a, Span s = {});
  static LExprPtr binary(BinaryOp op, LExprPtr a, LExprPtr b, Span s = {});
  static LExprPtr ite(LExprPtr c, LExprPtr t, LExprPtr e, Span s = {});
  static LExprPtr pre(LExprPtr a, Span s = {});
  static LExprPtr arrow(LExprPtr a, LExprPtr b, Span s = {});
  static LExprPtr call(std::string callee, std::vector<LExprPtr> args, Span s = {});
};

/// Structural equality, ignoring spans.
bool same_expr(const LExprPtr& a, const LExprPtr& b);
/// Simultaneous renaming of variables.
LExprPtr rename_vars(const LExprPtr& e, const std::map<std::string, std::string>& names);
void collect_vars(const LExprPtr& e, std::set<std::string>& out);
bool mentions_temporal(const LExprPtr& e);  // pre, -> or a call

struct Param {
  std::string name;
  Sort sort = Sort::Bool;
  Span span;
};

struct Equation {
  std::vector<std::string> lhs;
  LExprPtr rhs;
  Span span;
};

struct ContractSpec {
  std::vector<LExprPtr> assumes;
  std::vector<LExprPtr> guarantees;
  Span span;
};

struct Node {
  std::string name;
  std::vector<Param> inputs;
  std::vector<Param> outputs;
  std::optional<ContractSpec> contract;
  std::vector<Param> locals;
  std::vector<Equation> equations;
  Span span;

  const Param* find_var(const std::string& v) const;
  /// Calls in equation order, as (equation index, callee).
  std::vector<std::pair<std::size_t, std::string>> calls() const;
};

struct Program {
  std::vector<Node> nodes;

  const Node* find(const std::string& name) const;
  Node* find(const std::string& name);
};

bool same_program(const Program& a, const Program& b);

/// Lustre text with minimal parentheses and a fixed layout.
std::string print_expr(const LExprPtr& e);
std::string pretty_print(const Program& p);

} // namespace hrmv::lustre
