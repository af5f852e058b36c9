#include <gtest/gtest.h>

#include "query_text.hpp"
#include "smcsweep/quatex/parser.hpp"
#include "smcsweep/quatex/plan.hpp"

using namespace smcsweep::quatex;

namespace {

std::string grid_query(long lo, long step, long hi) {
  return "obsAtStep(x, obs) = if (s.rval(\"steps\") == x) then s.rval(obs) else # obsAtStep(x, obs) fi;\n"
         "eval parametric(E[obsAtStep(x, obs)], x, " +
         std::to_string(lo) + ", " + std::to_string(step) + ", " + std::to_string(hi) + ");";
}

}  // namespace

TEST(Plan, FiftyPointGrid) {
  const auto plan = expand_parametric(parse(kObsAtStepQuery), {{"obs", "UNEMPL"}});
  ASSERT_EQ(plan.points.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(plan.points[i].step, 101 + 10 * static_cast<std::int64_t>(i));
    EXPECT_EQ(plan.points[i].observable, "UNEMPL");
    EXPECT_FALSE(plan.points[i].generic);
  }
  EXPECT_EQ(plan.max_step, 591);
  EXPECT_FALSE(plan.has_generic());
}

TEST(Plan, SmallestGrid) {
  const auto plan = expand_parametric(parse(grid_query(1, 1, 3)), {{"obs", "X"}});
  ASSERT_EQ(plan.points.size(), 3u);
  EXPECT_EQ(plan.points[0].step, 1);
  EXPECT_EQ(plan.points[2].step, 3);
  EXPECT_EQ(plan.max_step, 3);
}

TEST(Plan, SinglePointGrid) {
  const auto plan = expand_parametric(parse(grid_query(5, 10, 5)), {{"obs", "X"}});
  ASSERT_EQ(plan.points.size(), 1u);
  EXPECT_EQ(plan.points[0].step, 5);
  EXPECT_EQ(plan.max_step, 5);
}

TEST(Plan, PointCountFormula) {
  for (long lo = 1; lo <= 20; lo += 3) {
    for (long step = 1; step <= 12; ++step) {
      for (long hi = lo; hi <= lo + 60; hi += 7) {
        const auto plan = expand_parametric(parse(grid_query(lo, step, hi)), {{"obs", "X"}});
        const std::size_t expected = static_cast<std::size_t>((hi - lo) / step + 1);
        ASSERT_EQ(plan.points.size(), expected) << lo << "," << step << "," << hi;
        EXPECT_EQ(plan.max_step, lo + static_cast<long>(expected - 1) * step);
        for (std::size_t i = 1; i < plan.points.size(); ++i) EXPECT_LT(plan.points[i - 1].step, plan.points[i].step);
      }
    }
  }
}

TEST(Plan, UnresolvedObservable) {
  try {
    expand_parametric(parse(kObsAtStepQuery), {});
    FAIL();
  } catch (const QueryError& e) {
    EXPECT_EQ(e.kind(), QueryErrorKind::unresolved_observable);
    EXPECT_NE(e.detail().find("obs"), std::string::npos);
  }
}

TEST(Plan, LiteralObservableNeedsNoBinding) {
  const auto plan = expand_parametric(
      parse("at(x) = if (s.rval(\"steps\") == x) then s.rval(\"X\") else # at(x) fi;\n"
            "eval parametric(E[at(x)], x, 2, 2, 6);"),
      {});
  ASSERT_EQ(plan.points.size(), 3u);
  EXPECT_EQ(plan.points[1].observable, "X");
}

TEST(Plan, NonConformingQueryFallsBackToGeneric) {
  const auto plan = expand_parametric(
      parse("f(x) = if (s.rval(\"steps\") >= x) then s.rval(\"X\") else # f(x) fi;\n"
            "eval parametric(E[f(x)], x, 10, 10, 30);"),
      {}, ExpandOptions{200, false});
  ASSERT_EQ(plan.points.size(), 3u);
  EXPECT_TRUE(plan.has_generic());
  EXPECT_EQ(plan.max_step, 200);
  EXPECT_EQ(plan.points[0].step, 10);
  EXPECT_EQ(plan.points[0].observable, "f(x)");
}

TEST(Plan, ForceGeneric) {
  ExpandOptions o;
  o.force_generic = true;
  const auto plan = expand_parametric(parse(kObsAtStepQuery), {{"obs", "X"}}, o);
  ASSERT_EQ(plan.points.size(), 50u);
  EXPECT_TRUE(plan.points[0].generic);
  EXPECT_EQ(plan.points[0].observable, "obsAtStep(x, obs){obs=X}");
  EXPECT_EQ(plan.max_step, 600);
}

TEST(Plan, MultipleDirectivesGroupedByObservable) {
  const auto plan = expand_parametric(
      parse("at(x, o) = if (s.rval(\"steps\") == x) then s.rval(o) else # at(x, o) fi;\n"
            "eval parametric(E[at(x, \"B\")], x, 5, 5, 10);\n"
            "eval parametric(E[at(x, \"A\")], x, 3, 4, 7);\n"
            "eval E[at(2, \"B\")];"),
      {});
  ASSERT_EQ(plan.points.size(), 5u);
  std::vector<std::pair<std::string, std::int64_t>> got;
  for (const auto& p : plan.points) got.emplace_back(p.observable, p.step);
  std::vector<std::pair<std::string, std::int64_t>> want{{"B", 2}, {"B", 5}, {"B", 10}, {"A", 3}, {"A", 7}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(plan.max_step, 10);
}

TEST(Plan, DuplicatePointRejected) {
  try {
    expand_parametric(parse("at(x) = if (s.rval(\"steps\") == x) then s.rval(\"X\") else # at(x) fi;\n"
                            "eval parametric(E[at(x)], x, 1, 1, 3); eval E[at(2)];"),
                      {});
    FAIL();
  } catch (const QueryError& e) {
    EXPECT_EQ(e.kind(), QueryErrorKind::duplicate_point);
  }
}
