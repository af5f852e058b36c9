#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smcsweep/quatex/error.hpp"

namespace smcsweep::quatex {

// Runtime value of a query expression. Comparisons yield 1.0 / 0.0.
using Value = std::variant<double, std::string>;

enum class CompareOp { eq, ne, lt, le, gt, ge };

std::string_view spelling(CompareOp op);

struct Expr;

struct NumberLit {
  double value;
  friend bool operator==(const NumberLit&, const NumberLit&) = default;
};

struct StringLit {
  std::string value;
  friend bool operator==(const StringLit&, const StringLit&) = default;
};

struct ParamRef {
  std::string name;
  friend bool operator==(const ParamRef&, const ParamRef&) = default;
};

// Observable read; `s.rval(e)` and `rval(e)` produce the same node.
struct Rval {
  std::vector<Expr> name;  // exactly one element
  friend bool operator==(const Rval&, const Rval&) = default;
};

struct Compare {
  CompareOp op;
  std::vector<Expr> operands;  // lhs, rhs
  friend bool operator==(const Compare&, const Compare&) = default;
};

struct IfExpr {
  std::vector<Expr> parts;  // condition, then-branch, else-branch
  friend bool operator==(const IfExpr&, const IfExpr&) = default;
};

struct Call {
  std::string callee;
  std::vector<Expr> args;
  friend bool operator==(const Call&, const Call&) = default;
};

// `# f(args)`: evaluate the call one step later.
struct Next {
  Call call;
  friend bool operator==(const Next&, const Next&) = default;
};

struct Expr {
  std::variant<NumberLit, StringLit, ParamRef, Rval, Compare, IfExpr, Call, Next> node;
  SourcePos pos;

  // Structural equality; source positions are ignored.
  friend bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }
};

struct Definition {
  std::string name;
  std::vector<std::string> params;
  Expr body;
  SourcePos pos;

  friend bool operator==(const Definition& a, const Definition& b) {
    return a.name == b.name && a.params == b.params && a.body == b.body;
  }
};

struct ParametricGrid {
  std::string variable;
  std::int64_t lo;
  std::int64_t step;
  std::int64_t hi;

  std::size_t size() const { return static_cast<std::size_t>((hi - lo) / step) + 1; }
  friend bool operator==(const ParametricGrid&, const ParametricGrid&) = default;
};

// `eval E[target];` or `eval parametric(E[target], var, lo, step, hi);`
struct EvalDirective {
  Expr target;
  std::optional<ParametricGrid> parametric;
  SourcePos pos;

  friend bool operator==(const EvalDirective& a, const EvalDirective& b) {
    return a.target == b.target && a.parametric == b.parametric;
  }
};

struct QueryAst {
  std::vector<Definition> definitions;
  std::vector<EvalDirective> directives;

  const Definition* find(std::string_view name) const;

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

}  // namespace smcsweep::quatex
