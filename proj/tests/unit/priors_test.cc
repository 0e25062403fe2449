#include "unisup/priors.h"

#include <gtest/gtest.h>

#include <random>

#include "../oracles/reference.h"
#include "unisup/error.h"

namespace unisup {
namespace {

PipelineConfig ThreeChannels() {
  auto c = LoadDefaultConfig();
  c.channel_caps = {{"A", 100}, {"B", 100}, {"C", 100}};
  return c;
}

TEST(ChannelPriorTest, Examples) {
  EXPECT_EQ(ChannelPrior(1, 1000), 1.0);
  EXPECT_EQ(ChannelPrior(1000, 1000), 0.0);
  EXPECT_NEAR(ChannelPrior(10, 100), 0.5, 1e-15);
  EXPECT_EQ(ChannelPrior(5000, 1000), 0.0);
}

TEST(ChannelPriorTest, Errors) {
  EXPECT_THROW(ChannelPrior(1, 1), Error);
  EXPECT_THROW(ChannelPrior(0, 100), Error);
}

TEST(ChannelPriorTest, MonotoneInRank) {
  for (std::int64_t cap : {2, 7, 100, 1000}) {
    for (std::int64_t rank = 1; rank < cap + 5; ++rank) {
      const double here = ChannelPrior(rank, cap);
      const double next = ChannelPrior(rank + 1, cap);
      EXPECT_GE(here, 0.0);
      EXPECT_LE(here, 1.0);
      if (rank < cap) {
        EXPECT_GT(here, next) << rank << " " << cap;
      } else {
        EXPECT_GE(here, next);
      }
    }
  }
}

TEST(AggregatePriorsTest, Examples) {
  const auto config = ThreeChannels();
  auto all = AggregatePriors({{"A", 1}, {"B", 1}, {"C", 1}}, config);
  EXPECT_EQ(all.aggregated, 1.0);
  EXPECT_EQ(all.consensus, 1.0);

  auto none = AggregatePriors({}, config);
  EXPECT_EQ(none.aggregated, 0.0);
  EXPECT_EQ(none.consensus, 0.0);
  EXPECT_EQ(none.channels_hit, 0);

  auto one = AggregatePriors({{"A", 10}}, config);
  EXPECT_NEAR(one.aggregated, 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(one.consensus, 1.0 / 3.0);
}

TEST(AggregatePriorsTest, UnknownChannelThrows) {
  EXPECT_THROW(AggregatePriors({{"Z", 1}}, ThreeChannels()), Error);
}

TEST(AggregatePriorsTest, Properties) {
  const auto config = ThreeChannels();
  std::mt19937_64 rng(5);
  const std::array<std::string, 3> names = {"A", "B", "C"};
  for (int trial = 0; trial < 500; ++trial) {
    std::map<std::string, std::int64_t> ranks;
    PriorScore previous = AggregatePriors(ranks, config);
    for (const auto& name : names) {
      if (rng() % 3 == 0) continue;
      ranks[name] = 1 + static_cast<std::int64_t>(rng() % 300);
      const auto now = AggregatePriors(ranks, config);
      EXPECT_GE(now.aggregated, previous.aggregated);
      EXPECT_GE(now.consensus, previous.consensus);
      previous = now;
    }
    double max_seen = 0.0;
    for (const auto& [ch, p] : previous.per_channel) {
      EXPECT_GE(previous.aggregated, p);
      EXPECT_NEAR(p, oracle::ChannelPrior(ranks[ch], 100), 1e-12);
      max_seen = std::max(max_seen, p);
    }
    EXPECT_EQ(previous.aggregated, max_seen);
    const double m = previous.consensus * 3.0;
    EXPECT_NEAR(m, std::round(m), 1e-12);
  }
}

}  // namespace
}  // namespace unisup
