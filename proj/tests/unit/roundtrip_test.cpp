// Property: parse(print(ast)) == ast over a generated corpus of valid queries.
#include <gtest/gtest.h>

#include <random>

#include "query_text.hpp"
#include "smcsweep/quatex/parser.hpp"
#include "smcsweep/quatex/printer.hpp"

using namespace smcsweep::quatex;

namespace {

class Generator {
 public:
  explicit Generator(std::uint32_t seed) : rng_(seed) {}

  QueryAst query() {
    QueryAst ast;
    const int n_defs = pick(1, 4);
    for (int d = 0; d < n_defs; ++d) {
      Definition def;
      def.name = "d" + std::to_string(d);
      for (int p = 0, n = pick(0, 3); p < n; ++p) def.params.push_back("p" + std::to_string(p));
      current_ = &def;
      current_defers_ = false;
      ast_ = &ast;
      def.body = expr(3, true);
      defers_.push_back(current_defers_);
      ast.definitions.push_back(def);
    }
    for (int k = 0, n = pick(1, 3); k < n; ++k) {
      EvalDirective dir;
      const std::size_t target = static_cast<std::size_t>(pick(0, n_defs - 1));
      Call call{ast.definitions[target].name, {}};
      const bool parametric = coin();
      for (std::size_t a = 0; a < ast.definitions[target].params.size(); ++a) {
        call.args.push_back(parametric && coin() ? Expr{ParamRef{"v"}, {}} : number());
      }
      dir.target = Expr{call, {}};
      if (parametric) {
        const int lo = pick(1, 50);
        dir.parametric = ParametricGrid{"v", lo, pick(1, 7), lo + pick(0, 40)};
      }
      ast.directives.push_back(dir);
    }
    return ast;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return pick(0, 1) == 1; }

  Expr number() {
    static const double pool[] = {0.0, 1.0, -3.0, 0.5, 101.0, 1e-3, -2.25, 600.0, 0.1, 12345.678};
    return Expr{NumberLit{pool[pick(0, 9)]}, {}};
  }

  Expr string() {
    static const char* pool[] = {"X", "UNEMPL", "steps", "a\"b", "back\\slash", "MARKET_SHARE1", ""};
    return Expr{StringLit{pool[pick(0, 6)]}, {}};
  }

  Call call_to(std::size_t def_index, int depth) {
    const auto& target = def_index < ast_->definitions.size() ? ast_->definitions[def_index] : *current_;
    Call c{target.name, {}};
    for (std::size_t a = 0; a < target.params.size(); ++a) c.args.push_back(expr(depth - 1, false));
    return c;
  }

  Expr expr(int depth, bool tail) {
    const int leaf = depth <= 0 ? 2 : 7;
    switch (pick(0, leaf + (tail ? 1 : 0))) {
      case 0: return number();
      case 1: return string();
      case 2:
        if (!current_->params.empty()) {
          return Expr{ParamRef{current_->params[static_cast<std::size_t>(pick(0, (int)current_->params.size() - 1))]},
                      {}};
        }
        return number();
      case 3: return Expr{Rval{{expr(depth - 1, false)}}, {}};
      case 4: {
        const auto op = static_cast<CompareOp>(pick(0, 5));
        return Expr{Compare{op, {expr(depth - 1, false), expr(depth - 1, false)}}, {}};
      }
      case 5: return Expr{IfExpr{{expr(depth - 1, false), expr(depth - 1, tail), expr(depth - 1, tail)}}, {}};
      case 6:
      case 7: {
        // Call to an earlier definition; deferring callees only in tail position.
        std::vector<std::size_t> ok;
        for (std::size_t j = 0; j < defers_.size(); ++j) {
          if (tail || !defers_[j]) ok.push_back(j);
        }
        if (ok.empty()) return number();
        const std::size_t j = ok[static_cast<std::size_t>(pick(0, (int)ok.size() - 1))];
        if (defers_[j]) current_defers_ = true;
        return Expr{call_to(j, depth), {}};
      }
      default: {
        // `#` in tail position, possibly recursive.
        current_defers_ = true;
        const std::size_t j = static_cast<std::size_t>(pick(0, (int)defers_.size()));
        return Expr{Next{call_to(j, depth)}, {}};
      }
    }
  }

  std::mt19937 rng_;
  QueryAst* ast_ = nullptr;
  const Definition* current_ = nullptr;
  bool current_defers_ = false;
  std::vector<bool> defers_;
};

}  // namespace

TEST(RoundTrip, ObsAtStepQuery) {
  const auto ast = parse(kObsAtStepQuery);
  EXPECT_EQ(parse(print(ast)), ast);
}

TEST(RoundTrip, GeneratedCorpus) {
  for (std::uint32_t seed = 1; seed <= 500; ++seed) {
    Generator gen(seed);
    const QueryAst ast = gen.query();
    ASSERT_NO_THROW(validate(ast)) << "generator produced an invalid query (seed " << seed << ")\n" << print(ast);
    const std::string text = print(ast);
    QueryAst reparsed;
    ASSERT_NO_THROW(reparsed = parse(text)) << text;
    ASSERT_EQ(reparsed, ast) << "seed " << seed << "\n" << text;
    EXPECT_EQ(print(reparsed), text);
  }
}
