#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smcsweep/quatex/error.hpp"

namespace smcsweep::quatex {

enum class TokenKind {
  identifier,
  number,
  string,
  lparen,
  rparen,
  comma,
  semicolon,
  assign,
  lbracket,
  rbracket,
  dot,
  hash,
  kw_if,
  kw_then,
  kw_else,
  kw_fi,
  kw_eval,
  kw_parametric,
  kw_expect,  // E
  kw_state,   // s
  kw_rval,
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  end,
};

struct Token {
  TokenKind kind;
  // Identifier name, decoded string contents, or the literal number text.
  std::string text;
  SourcePos pos;

  friend bool operator==(const Token&, const Token&) = default;
};

// Human-readable spelling used in diagnostics ("'('", "identifier", ...).
std::string_view describe(TokenKind kind);

// The returned sequence never contains the trailing `end` token.
std::vector<Token> tokenize(std::string_view source);

}  // namespace smcsweep::quatex
