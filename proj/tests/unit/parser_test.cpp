#include <gtest/gtest.h>

#include "query_text.hpp"
#include "smcsweep/quatex/parser.hpp"

using namespace smcsweep::quatex;

namespace {

QueryErrorKind error_kind(std::string_view src) {
  try {
    parse(src);
  } catch (const QueryError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "query parsed: " << src;
  return QueryErrorKind::lexical;
}

}  // namespace

TEST(Parser, ObsAtStepQuery) {
  const auto ast = parse(kObsAtStepQuery);
  ASSERT_EQ(ast.definitions.size(), 1u);
  const auto& def = ast.definitions[0];
  EXPECT_EQ(def.name, "obsAtStep");
  EXPECT_EQ(def.params, (std::vector<std::string>{"x", "obs"}));
  ASSERT_EQ(ast.directives.size(), 1u);
  ASSERT_TRUE(ast.directives[0].parametric);
  EXPECT_EQ(*ast.directives[0].parametric, (ParametricGrid{"x", 101, 10, 600}));
  const auto* call = std::get_if<Call>(&ast.directives[0].target.node);
  ASSERT_NE(call, nullptr);
  EXPECT_EQ(call->callee, "obsAtStep");

  const auto* cond = std::get_if<IfExpr>(&def.body.node);
  ASSERT_NE(cond, nullptr);
  const auto* cmp = std::get_if<Compare>(&cond->parts[0].node);
  ASSERT_NE(cmp, nullptr);
  EXPECT_EQ(cmp->op, CompareOp::eq);
  EXPECT_TRUE(std::holds_alternative<Rval>(cmp->operands[0].node));
  EXPECT_TRUE(std::holds_alternative<Next>(cond->parts[2].node));
}

TEST(Parser, ConstantQuery) {
  const auto ast = parse("eval E[f()]; f() = 1;");
  ASSERT_EQ(ast.definitions.size(), 1u);
  EXPECT_TRUE(ast.definitions[0].params.empty());
  EXPECT_EQ(ast.definitions[0].body, (Expr{NumberLit{1.0}, {}}));
  ASSERT_EQ(ast.directives.size(), 1u);
  EXPECT_FALSE(ast.directives[0].parametric);
}

TEST(Parser, ReceiverlessRvalIsAlias) {
  const auto a = parse("f(o) = s.rval(o); eval E[f(\"X\")];");
  const auto b = parse("f(o) = rval(o); eval E[f(\"X\")];");
  EXPECT_EQ(a, b);
}

TEST(Parser, CommentsAreIgnored) {
  const auto a = parse("-- header\nf() = 1; -- trailing\neval E[f()];");
  const auto b = parse("f() = 1; eval E[f()];");
  EXPECT_EQ(a, b);
}

TEST(Parser, UnguardedSelfRecursion) { EXPECT_EQ(error_kind("f() = f();"), QueryErrorKind::unguarded_recursion); }

TEST(Parser, UnguardedMutualRecursion) {
  EXPECT_EQ(error_kind("f() = g(); g() = if (1 == 1) then 2 else f() fi;"), QueryErrorKind::unguarded_recursion);
}

TEST(Parser, GuardedMutualRecursionAccepted) {
  EXPECT_NO_THROW(parse("f() = # g(); g() = if (s.rval(\"steps\") == 3) then 1 else # f() fi; eval E[f()];"));
}

TEST(Parser, UnknownOperator) { EXPECT_EQ(error_kind("eval E[g()];"), QueryErrorKind::unknown_operator); }

TEST(Parser, ArityMismatch) { EXPECT_EQ(error_kind("f(a) = a; eval E[f(1, 2)];"), QueryErrorKind::arity_mismatch); }

TEST(Parser, FreeIdentifierInBody) { EXPECT_EQ(error_kind("f(a) = b;"), QueryErrorKind::unknown_identifier); }

TEST(Parser, DuplicateDefinition) {
  EXPECT_EQ(error_kind("f() = 1; f() = 2;"), QueryErrorKind::duplicate_definition);
  EXPECT_EQ(error_kind("f(a, a) = a;"), QueryErrorKind::duplicate_definition);
}

TEST(Parser, NextOutsideTailPosition) {
  EXPECT_EQ(error_kind("g() = 1; f() = (# g()) == 1;"), QueryErrorKind::misplaced_next);
}

TEST(Parser, NextMustWrapCall) { EXPECT_EQ(error_kind("f() = # 1;"), QueryErrorKind::syntax); }

TEST(Parser, SyntaxErrorListsExpectedTokens) {
  try {
    parse("f(x = 1;");
    FAIL();
  } catch (const QueryError& e) {
    EXPECT_EQ(e.kind(), QueryErrorKind::syntax);
    EXPECT_EQ(e.pos(), (SourcePos{1, 5}));
    const std::string msg = e.what();
    EXPECT_NE(msg.find("expected"), std::string::npos) << msg;
    EXPECT_NE(msg.find("')'"), std::string::npos) << msg;
  }
}

TEST(Parser, ComparisonsAreNonAssociative) { EXPECT_EQ(error_kind("f() = 1 < 2 < 3;"), QueryErrorKind::syntax); }

TEST(Parser, ParametricGridChecks) {
  EXPECT_EQ(error_kind("f(x) = x; eval parametric(E[f(x)], x, 10, 0, 20);"), QueryErrorKind::empty_grid);
  EXPECT_EQ(error_kind("f(x) = x; eval parametric(E[f(x)], x, 20, 1, 10);"), QueryErrorKind::empty_grid);
  EXPECT_EQ(error_kind("f(x) = x; eval parametric(E[f(x)], x, 1.5, 1, 10);"), QueryErrorKind::syntax);
}

TEST(Parser, MissingSemicolon) { EXPECT_EQ(error_kind("f() = 1"), QueryErrorKind::syntax); }
