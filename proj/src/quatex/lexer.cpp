#include "smcsweep/quatex/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace smcsweep::quatex {

QueryError::QueryError(QueryErrorKind kind, SourcePos pos, const std::string& message)
    : std::runtime_error("line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ": " +
                         message),
      kind_(kind),
      pos_(pos),
      detail_(message) {}

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::number: return "number";
    case TokenKind::string: return "string";
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::comma: return "','";
    case TokenKind::semicolon: return "';'";
    case TokenKind::assign: return "'='";
    case TokenKind::lbracket: return "'['";
    case TokenKind::rbracket: return "']'";
    case TokenKind::dot: return "'.'";
    case TokenKind::hash: return "'#'";
    case TokenKind::kw_if: return "'if'";
    case TokenKind::kw_then: return "'then'";
    case TokenKind::kw_else: return "'else'";
    case TokenKind::kw_fi: return "'fi'";
    case TokenKind::kw_eval: return "'eval'";
    case TokenKind::kw_parametric: return "'parametric'";
    case TokenKind::kw_expect: return "'E'";
    case TokenKind::kw_state: return "'s'";
    case TokenKind::kw_rval: return "'rval'";
    case TokenKind::eq: return "'=='";
    case TokenKind::ne: return "'!='";
    case TokenKind::lt: return "'<'";
    case TokenKind::le: return "'<='";
    case TokenKind::gt: return "'>'";
    case TokenKind::ge: return "'>='";
    case TokenKind::end: return "end of input";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"if", TokenKind::kw_if},       {"then", TokenKind::kw_then},
      {"else", TokenKind::kw_else},   {"fi", TokenKind::kw_fi},
      {"eval", TokenKind::kw_eval},   {"parametric", TokenKind::kw_parametric},
      {"E", TokenKind::kw_expect},    {"s", TokenKind::kw_state},
      {"rval", TokenKind::kw_rval},
  };
  return table;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (at_end()) break;
      out.push_back(next_token());
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }

  char bump() {
    char c = src_[i_++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '-' && peek(1) == '-') {
        while (!at_end() && peek() != '\n') bump();
      } else {
        break;
      }
    }
  }

  Token next_token() {
    const SourcePos start = pos_;
    const char c = peek();

    if (is_ident_start(c)) {
      std::string word;
      while (!at_end() && is_ident_char(peek())) word += bump();
      auto kw = keywords().find(word);
      if (kw != keywords().end()) return {kw->second, word, start};
      return {TokenKind::identifier, word, start};
    }
    if (is_digit(c) || (c == '-' && is_digit(peek(1))) || (c == '.' && is_digit(peek(1)))) {
      return lex_number(start);
    }
    if (c == '"') return lex_string(start);

    bump();
    switch (c) {
      case '(': return {TokenKind::lparen, "(", start};
      case ')': return {TokenKind::rparen, ")", start};
      case ',': return {TokenKind::comma, ",", start};
      case ';': return {TokenKind::semicolon, ";", start};
      case '[': return {TokenKind::lbracket, "[", start};
      case ']': return {TokenKind::rbracket, "]", start};
      case '.': return {TokenKind::dot, ".", start};
      case '#': return {TokenKind::hash, "#", start};
      case '=':
        if (peek() == '=') {
          bump();
          return {TokenKind::eq, "==", start};
        }
        return {TokenKind::assign, "=", start};
      case '!':
        if (peek() == '=') {
          bump();
          return {TokenKind::ne, "!=", start};
        }
        break;
      case '<':
        if (peek() == '=') {
          bump();
          return {TokenKind::le, "<=", start};
        }
        return {TokenKind::lt, "<", start};
      case '>':
        if (peek() == '=') {
          bump();
          return {TokenKind::ge, ">=", start};
        }
        return {TokenKind::gt, ">", start};
      default:
        break;
    }
    std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c)
                                                                      : "\\x" + std::to_string(static_cast<unsigned char>(c));
    throw QueryError(QueryErrorKind::lexical, start, "illegal character '" + shown + "'");
  }

  Token lex_number(SourcePos start) {
    std::string text;
    if (peek() == '-') text += bump();
    while (is_digit(peek())) text += bump();
    if (peek() == '.' && is_digit(peek(1))) {
      text += bump();
      while (is_digit(peek())) text += bump();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
      text += bump();
      if (peek() == '+' || peek() == '-') text += bump();
      while (is_digit(peek())) text += bump();
    }
    return {TokenKind::number, text, start};
  }

  Token lex_string(SourcePos start) {
    bump();  // opening quote
    std::string value;
    while (true) {
      if (at_end() || peek() == '\n') {
        throw QueryError(QueryErrorKind::lexical, start, "unterminated string literal");
      }
      char c = bump();
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) throw QueryError(QueryErrorKind::lexical, start, "unterminated string literal");
        char esc = bump();
        if (esc != '"' && esc != '\\') {
          throw QueryError(QueryErrorKind::lexical, start, std::string("unknown escape '\\") + esc + "'");
        }
        value += esc;
      } else {
        value += c;
      }
    }
    return {TokenKind::string, value, start};
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace smcsweep::quatex
