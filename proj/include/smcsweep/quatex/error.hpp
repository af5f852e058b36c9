#pragma once

#include <stdexcept>
#include <string>

namespace smcsweep::quatex {

struct SourcePos {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class QueryErrorKind {
  lexical,
  syntax,
  unknown_operator,
  arity_mismatch,
  unknown_identifier,
  duplicate_definition,
  unguarded_recursion,
  misplaced_next,
  unresolved_observable,
  empty_grid,
  duplicate_point,
};

// Static (parse-time or plan-time) failure, always tied to a source position.
class QueryError : public std::runtime_error {
 public:
  QueryError(QueryErrorKind kind, SourcePos pos, const std::string& message);

  QueryErrorKind kind() const noexcept { return kind_; }
  SourcePos pos() const noexcept { return pos_; }
  // Message without the position prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  QueryErrorKind kind_;
  SourcePos pos_;
  std::string detail_;
};

// Run-time failure while evaluating a query against a simulator trace.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HorizonExceeded : public EvalError {
 public:
  using EvalError::EvalError;
};

}  // namespace smcsweep::quatex
