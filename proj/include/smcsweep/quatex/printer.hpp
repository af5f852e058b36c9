#pragma once

#include <string>

#include "smcsweep/quatex/ast.hpp"

namespace smcsweep::quatex {

// Canonical concrete syntax; parse(print(ast)) == ast for every valid AST.
std::string print(const QueryAst& ast);
std::string print(const Expr& expr);

}  // namespace smcsweep::quatex
