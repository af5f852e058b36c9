#include <gtest/gtest.h>

#include <cmath>

#include "smcsweep/engine/committer.hpp"
#include "smcsweep/stats/t_dist.hpp"

using smcsweep::engine::DuplicateRun;
using smcsweep::engine::SampleCommitter;
using smcsweep::stats::StoppingPolicy;

namespace {

StoppingPolicy policy(std::uint64_t block = 30, std::optional<std::uint64_t> cap = std::nullopt) {
  StoppingPolicy p;
  p.delta = 1.0;
  p.block_size = block;
  p.max_runs = cap;
  return p;
}

}  // namespace

TEST(Committer, AppliesInRunIndexOrder) {
  SampleCommitter c({1.0}, policy(4));
  c.commit(2, {30.0});
  c.commit(0, {10.0});
  EXPECT_EQ(c.committed(), 1u);
  EXPECT_EQ(c.buffered(), 1u);
  c.commit(1, {20.0});
  EXPECT_EQ(c.committed(), 3u);
  EXPECT_EQ(c.buffered(), 0u);
  EXPECT_DOUBLE_EQ(c.points()[0].stat().mean(), 20.0);
}

TEST(Committer, OrderDoesNotMatter) {
  SampleCommitter a({0.1}, policy(3));
  SampleCommitter b({0.1}, policy(3));
  const std::vector<double> xs{0.3, 1.7, -2.0, 5.5, 0.25, 9.0};
  for (std::size_t i = 0; i < xs.size(); ++i) a.commit(i, {xs[i]});
  for (std::size_t i = xs.size(); i-- > 0;) b.commit(i, {xs[i]});
  EXPECT_EQ(a.points()[0].stat(), b.points()[0].stat());
}

TEST(Committer, Duplicates) {
  SampleCommitter c({1.0}, policy(4));
  c.commit(0, {1.0});
  EXPECT_THROW(c.commit(0, {1.0}), DuplicateRun);
  c.commit(3, {1.0});
  EXPECT_THROW(c.commit(3, {1.0}), DuplicateRun);
}

TEST(Committer, SizeMismatch) {
  SampleCommitter c({1.0, 1.0}, policy(4));
  EXPECT_THROW(c.commit(0, {1.0}), std::invalid_argument);
}

TEST(Committer, RejectsBadConstruction) {
  EXPECT_THROW(SampleCommitter({}, policy()), std::invalid_argument);
  EXPECT_THROW(SampleCommitter({0.0}, policy()), std::invalid_argument);
  EXPECT_THROW(SampleCommitter({-1.0}, policy()), std::invalid_argument);
}

TEST(Committer, FreezesOnlyAtBoundaries) {
  // Point 0 constant: converges at the first boundary. Point 1 alternates widely.
  SampleCommitter c({0.01, 0.01}, policy(4));
  for (std::uint64_t i = 0; i < 3; ++i) c.commit(i, {1.0, i % 2 ? 100.0 : -100.0});
  EXPECT_EQ(c.frozen_count(), 0u);
  c.commit(3, {1.0, 100.0});
  EXPECT_EQ(c.frozen_count(), 1u);
  EXPECT_TRUE(c.points()[0].frozen());
  EXPECT_EQ(c.points()[0].n_at_convergence(), 4u);
  EXPECT_FALSE(c.points()[1].frozen());
  EXPECT_EQ(c.last_boundary(), 4u);
}

TEST(Committer, FrozenPointIgnoresLaterSamples) {
  SampleCommitter c({0.01, 0.01}, policy(4));
  for (std::uint64_t i = 0; i < 4; ++i) c.commit(i, {1.0, i % 2 ? 100.0 : -100.0});
  c.commit(4, {999.0, 100.0});
  EXPECT_EQ(c.points()[0].stat().count(), 4u);
  EXPECT_EQ(c.points()[0].stat().mean(), 1.0);
  EXPECT_EQ(c.points()[1].stat().count(), 5u);
}

TEST(Committer, FreezeDecisionUsesHalfWidth) {
  // Samples +-1 over a block of 30: half-width t*s/sqrt(30), s = sqrt(30/29).
  const double hw = smcsweep::stats::t_quantile(0.975, 29) * std::sqrt(30.0 / 29.0) / std::sqrt(30.0);
  SampleCommitter tight({hw * 1.001}, policy(30));
  SampleCommitter loose({hw * 0.999}, policy(30));
  for (std::uint64_t i = 0; i < 30; ++i) {
    tight.commit(i, {i % 2 ? 1.0 : -1.0});
    loose.commit(i, {i % 2 ? 1.0 : -1.0});
  }
  EXPECT_TRUE(tight.all_frozen());
  EXPECT_FALSE(loose.all_frozen());
}

TEST(Committer, CapRoundedDownToBlock) {
  SampleCommitter c({1e-9}, policy(4, 10));
  EXPECT_EQ(c.run_cap(), 8u);
  for (std::uint64_t i = 0; i < 8; ++i) c.commit(i, {static_cast<double>(i)});
  EXPECT_TRUE(c.cap_reached());
  EXPECT_TRUE(c.finished());
  EXPECT_FALSE(c.all_frozen());
  c.commit(8, {1.0});  // discarded
  EXPECT_EQ(c.committed(), 8u);
  EXPECT_EQ(c.points()[0].stat().count(), 8u);
}

TEST(Committer, BufferedRunsDroppedAfterFinish) {
  SampleCommitter c({1.0}, policy(4));
  c.commit(5, {1.0});
  for (std::uint64_t i = 0; i < 4; ++i) c.commit(i, {1.0});
  EXPECT_TRUE(c.finished());
  EXPECT_EQ(c.committed(), 4u);
  EXPECT_EQ(c.buffered(), 0u);
}
