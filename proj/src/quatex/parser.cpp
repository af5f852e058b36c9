#include "smcsweep/quatex/parser.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <set>

#include "smcsweep/quatex/lexer.hpp"

namespace smcsweep::quatex {

std::string_view spelling(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
  }
  return "?";
}

const Definition* QueryAst::find(std::string_view name) const {
  for (const auto& def : definitions) {
    if (def.name == name) return &def;
  }
  return nullptr;
}

namespace {

std::optional<CompareOp> as_compare(TokenKind kind) {
  switch (kind) {
    case TokenKind::eq: return CompareOp::eq;
    case TokenKind::ne: return CompareOp::ne;
    case TokenKind::lt: return CompareOp::lt;
    case TokenKind::le: return CompareOp::le;
    case TokenKind::gt: return CompareOp::gt;
    case TokenKind::ge: return CompareOp::ge;
    default: return std::nullopt;
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    SourcePos end_pos = tokens_.empty() ? SourcePos{} : tokens_.back().pos;
    tokens_.push_back({TokenKind::end, "", end_pos});
  }

  QueryAst program() {
    QueryAst ast;
    while (!check(TokenKind::end)) {
      if (check(TokenKind::kw_eval)) {
        ast.directives.push_back(directive());
      } else if (check(TokenKind::identifier)) {
        ast.definitions.push_back(definition());
      } else {
        fail({TokenKind::identifier, TokenKind::kw_eval});
      }
    }
    return ast;
  }

 private:
  const Token& peek() const { return tokens_[i_]; }
  bool check(TokenKind kind) const { return peek().kind == kind; }

  const Token& advance() { return tokens_[i_ < tokens_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(std::initializer_list<TokenKind> expected) const {
    std::string msg = "expected ";
    bool first = true;
    for (TokenKind kind : expected) {
      if (!first) msg += " or ";
      msg += describe(kind);
      first = false;
    }
    const Token& got = peek();
    msg += ", found ";
    msg += got.kind == TokenKind::end ? std::string(describe(got.kind)) : "'" + got.text + "'";
    throw QueryError(QueryErrorKind::syntax, got.pos, msg);
  }

  const Token& expect(TokenKind kind) {
    if (!check(kind)) fail({kind});
    return advance();
  }

  Definition definition() {
    Definition def;
    def.pos = peek().pos;
    def.name = expect(TokenKind::identifier).text;
    expect(TokenKind::lparen);
    if (!check(TokenKind::rparen)) {
      def.params.push_back(expect(TokenKind::identifier).text);
      while (check(TokenKind::comma)) {
        advance();
        def.params.push_back(expect(TokenKind::identifier).text);
      }
    }
    expect(TokenKind::rparen);
    expect(TokenKind::assign);
    def.body = expr();
    expect(TokenKind::semicolon);
    return def;
  }

  EvalDirective directive() {
    EvalDirective dir;
    dir.pos = expect(TokenKind::kw_eval).pos;
    if (check(TokenKind::kw_parametric)) {
      advance();
      expect(TokenKind::lparen);
      dir.target = expectation();
      expect(TokenKind::comma);
      ParametricGrid grid;
      grid.variable = expect(TokenKind::identifier).text;
      expect(TokenKind::comma);
      grid.lo = integer();
      expect(TokenKind::comma);
      SourcePos step_pos = peek().pos;
      grid.step = integer();
      expect(TokenKind::comma);
      SourcePos hi_pos = peek().pos;
      grid.hi = integer();
      expect(TokenKind::rparen);
      if (grid.step < 1) throw QueryError(QueryErrorKind::empty_grid, step_pos, "parametric step must be >= 1");
      if (grid.hi < grid.lo) {
        throw QueryError(QueryErrorKind::empty_grid, hi_pos, "parametric grid is empty (hi < lo)");
      }
      dir.parametric = std::move(grid);
    } else if (check(TokenKind::kw_expect)) {
      dir.target = expectation();
    } else {
      fail({TokenKind::kw_parametric, TokenKind::kw_expect});
    }
    expect(TokenKind::semicolon);
    return dir;
  }

  Expr expectation() {
    expect(TokenKind::kw_expect);
    expect(TokenKind::lbracket);
    Expr e = expr();
    expect(TokenKind::rbracket);
    return e;
  }

  std::int64_t integer() {
    const Token& tok = expect(TokenKind::number);
    std::int64_t value = 0;
    auto [end, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (ec != std::errc() || end != tok.text.data() + tok.text.size()) {
      throw QueryError(QueryErrorKind::syntax, tok.pos, "expected integer, found '" + tok.text + "'");
    }
    return value;
  }

  Expr expr() {
    Expr lhs = primary();
    if (auto op = as_compare(peek().kind)) {
      SourcePos pos = lhs.pos;
      advance();
      Expr rhs = primary();
      Compare cmp{*op, {}};
      cmp.operands.push_back(std::move(lhs));
      cmp.operands.push_back(std::move(rhs));
      return Expr{std::move(cmp), pos};
    }
    return lhs;
  }

  Call call_after_name(const Token& name) {
    Call call{name.text, {}};
    expect(TokenKind::lparen);
    if (!check(TokenKind::rparen)) {
      call.args.push_back(expr());
      while (check(TokenKind::comma)) {
        advance();
        call.args.push_back(expr());
      }
    }
    expect(TokenKind::rparen);
    return call;
  }

  Expr primary() {
    const Token& tok = peek();
    const SourcePos pos = tok.pos;
    switch (tok.kind) {
      case TokenKind::number: {
        advance();
        double value = 0.0;
        std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
        return Expr{NumberLit{value}, pos};
      }
      case TokenKind::string:
        advance();
        return Expr{StringLit{tok.text}, pos};
      case TokenKind::lparen: {
        advance();
        Expr inner = expr();
        expect(TokenKind::rparen);
        return inner;
      }
      case TokenKind::kw_if: {
        advance();
        IfExpr node;
        node.parts.push_back(expr());
        expect(TokenKind::kw_then);
        node.parts.push_back(expr());
        expect(TokenKind::kw_else);
        node.parts.push_back(expr());
        expect(TokenKind::kw_fi);
        return Expr{std::move(node), pos};
      }
      case TokenKind::hash: {
        advance();
        const Token& name = expect(TokenKind::identifier);
        return Expr{Next{call_after_name(name)}, pos};
      }
      case TokenKind::kw_state:
        advance();
        expect(TokenKind::dot);
        if (!check(TokenKind::kw_rval)) fail({TokenKind::kw_rval});
        return rval();
      case TokenKind::kw_rval:
        return rval();
      case TokenKind::identifier: {
        const Token& name = advance();
        if (check(TokenKind::lparen)) return Expr{call_after_name(name), pos};
        return Expr{ParamRef{name.text}, pos};
      }
      default:
        fail({TokenKind::number, TokenKind::string, TokenKind::identifier, TokenKind::lparen, TokenKind::kw_if,
              TokenKind::hash, TokenKind::kw_state, TokenKind::kw_rval});
    }
  }

  Expr rval() {
    SourcePos pos = expect(TokenKind::kw_rval).pos;
    expect(TokenKind::lparen);
    Rval node;
    node.name.push_back(expr());
    expect(TokenKind::rparen);
    return Expr{std::move(node), pos};
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
};

// Static checks over a complete AST.
class Validator {
 public:
  explicit Validator(const QueryAst& ast) : ast_(ast) {}

  void run() {
    std::set<std::string> seen;
    for (const auto& def : ast_.definitions) {
      if (!seen.insert(def.name).second) {
        throw QueryError(QueryErrorKind::duplicate_definition, def.pos, "operator '" + def.name + "' defined twice");
      }
      std::set<std::string> params;
      for (const auto& p : def.params) {
        if (!params.insert(p).second) {
          throw QueryError(QueryErrorKind::duplicate_definition, def.pos,
                           "parameter '" + p + "' repeated in '" + def.name + "'");
        }
      }
    }
    for (const auto& def : ast_.definitions) {
      std::set<std::string> scope(def.params.begin(), def.params.end());
      check_names(def.body, &scope);
    }
    for (const auto& dir : ast_.directives) check_names(dir.target, nullptr);

    compute_may_defer();
    for (const auto& def : ast_.definitions) check_tail(def.body, true);
    for (const auto& dir : ast_.directives) check_tail(dir.target, true);

    check_guarded_recursion();
  }

 private:
  // scope == nullptr means directive level, where identifiers are bound later.
  void check_names(const Expr& e, const std::set<std::string>* scope) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, ParamRef>) {
            if (scope && !scope->count(node.name)) {
              throw QueryError(QueryErrorKind::unknown_identifier, e.pos,
                               "'" + node.name + "' is not a parameter of the enclosing operator");
            }
          } else if constexpr (std::is_same_v<T, Rval>) {
            check_names(node.name.front(), scope);
          } else if constexpr (std::is_same_v<T, Compare>) {
            for (const auto& op : node.operands) check_names(op, scope);
          } else if constexpr (std::is_same_v<T, IfExpr>) {
            for (const auto& part : node.parts) check_names(part, scope);
          } else if constexpr (std::is_same_v<T, Call>) {
            check_call(node, e.pos, scope);
          } else if constexpr (std::is_same_v<T, Next>) {
            check_call(node.call, e.pos, scope);
          }
        },
        e.node);
  }

  void check_call(const Call& call, SourcePos pos, const std::set<std::string>* scope) {
    const Definition* def = ast_.find(call.callee);
    if (!def) throw QueryError(QueryErrorKind::unknown_operator, pos, "unknown operator '" + call.callee + "'");
    if (def->params.size() != call.args.size()) {
      throw QueryError(QueryErrorKind::arity_mismatch, pos,
                       "operator '" + call.callee + "' expects " + std::to_string(def->params.size()) +
                           " argument(s), got " + std::to_string(call.args.size()));
    }
    for (const auto& arg : call.args) check_names(arg, scope);
  }

  bool tail_defers(const Expr& e) const {
    if (std::holds_alternative<Next>(e.node)) return true;
    if (const auto* node = std::get_if<IfExpr>(&e.node)) return tail_defers(node->parts[1]) || tail_defers(node->parts[2]);
    if (const auto* node = std::get_if<Call>(&e.node)) return may_defer_.at(node->callee);
    return false;
  }

  void compute_may_defer() {
    for (const auto& def : ast_.definitions) may_defer_[def.name] = false;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& def : ast_.definitions) {
        if (!may_defer_[def.name] && tail_defers(def.body)) {
          may_defer_[def.name] = true;
          changed = true;
        }
      }
    }
  }

  void check_tail(const Expr& e, bool tail) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Next>) {
            if (!tail) throw QueryError(QueryErrorKind::misplaced_next, e.pos, "'#' is only allowed in tail position");
            for (const auto& arg : node.call.args) check_tail(arg, false);
          } else if constexpr (std::is_same_v<T, Call>) {
            if (!tail && may_defer_.at(node.callee)) {
              throw QueryError(QueryErrorKind::misplaced_next, e.pos,
                               "call to '" + node.callee + "' may defer to a later step and must be in tail position");
            }
            for (const auto& arg : node.args) check_tail(arg, false);
          } else if constexpr (std::is_same_v<T, IfExpr>) {
            check_tail(node.parts[0], false);
            check_tail(node.parts[1], tail);
            check_tail(node.parts[2], tail);
          } else if constexpr (std::is_same_v<T, Compare>) {
            for (const auto& op : node.operands) check_tail(op, false);
          } else if constexpr (std::is_same_v<T, Rval>) {
            check_tail(node.name.front(), false);
          }
        },
        e.node);
  }

  struct Edge {
    std::string callee;
    SourcePos pos;
  };

  // Calls evaluated in the current step (everything except the call directly under '#').
  void collect_unguarded(const Expr& e, std::vector<Edge>& out) const {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Next>) {
            for (const auto& arg : node.call.args) collect_unguarded(arg, out);
          } else if constexpr (std::is_same_v<T, Call>) {
            out.push_back({node.callee, e.pos});
            for (const auto& arg : node.args) collect_unguarded(arg, out);
          } else if constexpr (std::is_same_v<T, IfExpr>) {
            for (const auto& part : node.parts) collect_unguarded(part, out);
          } else if constexpr (std::is_same_v<T, Compare>) {
            for (const auto& op : node.operands) collect_unguarded(op, out);
          } else if constexpr (std::is_same_v<T, Rval>) {
            collect_unguarded(node.name.front(), out);
          }
        },
        e.node);
  }

  void check_guarded_recursion() {
    std::map<std::string, std::vector<Edge>> graph;
    for (const auto& def : ast_.definitions) collect_unguarded(def.body, graph[def.name]);

    enum class Mark { none, active, done };
    std::map<std::string, Mark> mark;
    std::vector<std::string> path;

    std::function<void(const std::string&)> visit = [&](const std::string& name) {
      mark[name] = Mark::active;
      path.push_back(name);
      for (const auto& edge : graph[name]) {
        if (mark[edge.callee] == Mark::active) {
          std::string cycle;
          auto it = std::find(path.begin(), path.end(), edge.callee);
          for (; it != path.end(); ++it) cycle += *it + " -> ";
          cycle += edge.callee;
          throw QueryError(QueryErrorKind::unguarded_recursion, edge.pos,
                           "recursion without an interposed '#': " + cycle);
        }
        if (mark[edge.callee] == Mark::none) visit(edge.callee);
      }
      path.pop_back();
      mark[name] = Mark::done;
    };
    for (const auto& def : ast_.definitions) {
      if (mark[def.name] == Mark::none) visit(def.name);
    }
  }

  const QueryAst& ast_;
  std::map<std::string, bool> may_defer_;
};

}  // namespace

void validate(const QueryAst& ast) { Validator(ast).run(); }

QueryAst parse(std::string_view source) {
  QueryAst ast = Parser(tokenize(source)).program();
  validate(ast);
  return ast;
}

}  // namespace smcsweep::quatex
