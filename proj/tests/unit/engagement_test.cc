#include "unisup/engagement.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "../oracles/reference.h"
#include "unisup/error.h"

namespace unisup {
namespace {

constexpr std::array<double, 4> kPaperLambdas = {1.5, 0.3, 0.1, 0.01};

TEST(RawEngagementTest, Examples) {
  EXPECT_EQ(RawEngagement({0, 0, 0, 0}, kPaperLambdas), 0.0);
  EXPECT_NEAR(RawEngagement({1, 0, 0, 0}, kPaperLambdas), 0.916290731874155, 1e-12);
  EXPECT_NEAR(RawEngagement({0, 0, 0, 100}, kPaperLambdas), 0.693147180559945, 1e-12);
}

TEST(NormalizeAndSmoothTest, SingleCandidate) {
  const std::vector<ItemRaw> raws = {{"a", 0.916291}};
  const auto out = NormalizeAndSmooth(raws, LoadDefaultConfig());
  EXPECT_NEAR(out.at("a").normalized, 0.99999999, 1e-9);
  EXPECT_NEAR(out.at("a").smoothed, 0.982014, 1e-6);
}

TEST(NormalizeAndSmoothTest, CenterMapsToHalf) {
  EXPECT_EQ(SmoothEngagement(0.5, 8.0), 0.5);
}

TEST(NormalizeAndSmoothTest, AllZeroGetsFloor) {
  const std::vector<ItemRaw> raws = {{"a", 0.0}, {"b", 0.0}, {"c", 0.0}};
  for (const auto& [id, s] : NormalizeAndSmooth(raws, LoadDefaultConfig())) {
    EXPECT_EQ(s.normalized, 0.0);
    EXPECT_NEAR(s.smoothed, 0.017986209962091559, 1e-15) << id;
  }
}

TEST(NormalizeAndSmoothTest, Errors) {
  const auto config = LoadDefaultConfig();
  EXPECT_THROW(NormalizeAndSmooth({}, config), Error);
  const std::vector<ItemRaw> negative = {{"a", -1.0}};
  EXPECT_THROW(NormalizeAndSmooth(negative, config), Error);
  const std::vector<ItemRaw> repeated = {{"a", 1.0}, {"a", 2.0}};
  EXPECT_THROW(NormalizeAndSmooth(repeated, config), Error);
}

TEST(NormalizeAndSmoothTest, MatchesReference) {
  const auto config = LoadDefaultConfig();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ItemRaw> raws;
    double max_raw = 0.0;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 30); ++i) {
      EngagementCounts c{static_cast<std::int64_t>(rng() % 5), static_cast<std::int64_t>(rng() % 20),
                         static_cast<std::int64_t>(rng() % 200), static_cast<std::int64_t>(rng() % 5000)};
      const double raw = RawEngagement(c, kPaperLambdas);
      EXPECT_NEAR(raw, oracle::RawEngagement(c.orders, c.carts, c.clicks, c.views, kPaperLambdas), 1e-12);
      raws.emplace_back("i" + std::to_string(i), raw);
      max_raw = std::max(max_raw, raw);
    }
    for (const auto& [id, raw] : raws) {
      const auto s = NormalizeAndSmooth(raws, config).at(id);
      const double n = oracle::Normalized(raw, max_raw, config.epsilon_norm);
      EXPECT_NEAR(s.normalized, n, 1e-12);
      EXPECT_NEAR(s.smoothed, oracle::Smoothed(n, 8.0), 1e-12);
      EXPECT_GT(s.smoothed, 0.0);
      EXPECT_LT(s.smoothed, 1.0);
    }
  }
}

TEST(NormalizeAndSmoothTest, MonotoneAndBounded) {
  const auto config = LoadDefaultConfig();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ItemRaw> raws;
    for (int i = 0; i < 20; ++i) raws.emplace_back("i" + std::to_string(i), u(rng));
    const auto out = NormalizeAndSmooth(raws, config);
    double max_norm = 0.0;
    for (const auto& [ia, ra] : raws) {
      max_norm = std::max(max_norm, out.at(ia).normalized);
      for (const auto& [ib, rb] : raws) {
        if (ra < rb) {
          EXPECT_LT(out.at(ia).normalized, out.at(ib).normalized);
          EXPECT_LT(out.at(ia).smoothed, out.at(ib).smoothed);
        }
      }
    }
    EXPECT_LE(max_norm, 1.0);
    EXPECT_GT(max_norm, 1.0 - 1e-6);
  }
}

TEST(NormalizeAndSmoothTest, LambdaScalingPreservesOrder) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EngagementCounts> counts;
    for (int i = 0; i < 15; ++i) {
      counts.push_back({static_cast<std::int64_t>(rng() % 4), static_cast<std::int64_t>(rng() % 10),
                        static_cast<std::int64_t>(rng() % 100), static_cast<std::int64_t>(rng() % 1000)});
    }
    const double scale = 0.1 + static_cast<double>(rng() % 100) / 10.0;
    std::array<double, 4> scaled = kPaperLambdas;
    for (auto& l : scaled) l *= scale;
    std::vector<ItemRaw> a, b;
    for (int i = 0; i < 15; ++i) {
      a.emplace_back("i" + std::to_string(i), RawEngagement(counts[i], kPaperLambdas));
      b.emplace_back("i" + std::to_string(i), RawEngagement(counts[i], scaled));
    }
    const auto na = NormalizeAndSmooth(a, LoadDefaultConfig());
    const auto nb = NormalizeAndSmooth(b, LoadDefaultConfig());
    for (const auto& [x, sx] : na) {
      for (const auto& [y, sy] : na) {
        const auto cmp_a = sx.normalized < sy.normalized;
        const auto cmp_b = nb.at(x).normalized < nb.at(y).normalized;
        EXPECT_EQ(cmp_a, cmp_b);
      }
    }
  }
}

}  // namespace
}  // namespace unisup
