#pragma once

#include <string_view>

#include "smcsweep/quatex/ast.hpp"

namespace smcsweep::quatex {

// Parses and statically validates a query. Throws QueryError on any failure:
// syntax errors list the expected tokens, and the checks reject unknown
// operators, arity mismatches, free identifiers inside definitions, `#` outside
// tail position, and recursion cycles that do not pass through a `#`.
QueryAst parse(std::string_view source);

// Runs the static checks on an already-built AST (parse() calls this).
void validate(const QueryAst& ast);

}  // namespace smcsweep::quatex
