#include "unisup/pipeline.h"

#include <gtest/gtest.h>

#include <cmath>

#include "unisup/engagement.h"
#include "unisup/error.h"
#include "unisup/synthgen.h"

namespace unisup {
namespace {

PipelineConfig FixtureConfig() {
  auto config = LoadDefaultConfig();
  config.channel_caps = {{"ch0", 100}, {"ch1", 100}, {"ch2", 100}};
  return config;
}

QipRecord Record(std::string q, std::string item, int rating) {
  QipRecord r;
  r.query_id = std::move(q);
  r.query_text = "red shoes";
  r.item_id = std::move(item);
  r.item_text = "red shoes";
  r.human_rating = rating;
  return r;
}

// Three records whose targets can be worked out by hand.
std::vector<QipRecord> Fixture() {
  auto a = Record("q1", "a", 3);
  a.channel_ranks = {{"ch0", 1}, {"ch1", 1}, {"ch2", 1}};
  a.engagement = {.orders = 1};  // raw ln 2.5
  auto b = Record("q1", "b", 2);
  b.item_text = "red running shoes";
  b.channel_ranks = {{"ch0", 10}};
  b.engagement = {.orders = 3, .carts = 2, .clicks = 1, .views = 5};  // raw 2 ln 2.5
  auto c = Record("q2", "c", 4);
  return {a, b, c};
}

TEST(ScoreCorpusTest, FixtureMatchesHandValues) {
  const auto targets = ScoreCorpus(Fixture(), FixtureConfig());
  ASSERT_EQ(targets.size(), 3u);

  const auto& a = targets[0];
  EXPECT_EQ(a.polarity, Polarity::kPositive);
  EXPECT_EQ(a.decided_by, Decision::kHuman);
  EXPECT_NEAR(a.engagement, 0.5, 1e-6);
  EXPECT_NEAR(*a.rel_rank, 0.7, 1e-12);
  EXPECT_NEAR(a.target, 0.67, 1e-6);

  const auto& b = targets[1];
  EXPECT_EQ(b.polarity, Polarity::kNegative);
  EXPECT_EQ(b.target, 0.0);
  EXPECT_NEAR(b.prior, 0.5, 1e-12);
  EXPECT_NEAR(b.consensus, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(b.token_similarity, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(*b.difficulty, 0.7 * 0.5 + 0.3 * 2.0 / 3.0, 1e-12);
  EXPECT_FALSE(b.rel_rank);

  const auto& c = targets[2];
  EXPECT_NEAR(c.engagement, 0.017986209962091559, 1e-12);
  EXPECT_NEAR(*c.rel_rank, 0.6, 1e-12);
  EXPECT_NEAR(c.target, 0.5127, 1e-4);
}

TEST(ScoreCorpusTest, RelOnlyDropsEngagement) {
  const auto config = RelOnly(FixtureConfig());
  EXPECT_EQ(config.mu_rel, 1.0);
  EXPECT_EQ(config.lambda_eng, 0.0);
  for (const auto& t : ScoreCorpus(Fixture(), config)) {
    if (t.rel_rank) EXPECT_EQ(t.target, std::clamp(*t.rel_rank, 0.0, 1.0));
  }
}

TEST(ScoreCorpusTest, EmptyAndInvalid) {
  EXPECT_TRUE(ScoreCorpus({}, LoadDefaultConfig()).empty());
  auto bad = Fixture();
  bad[1].channel_ranks["ch9"] = 3;
  try {
    ScoreCorpus(bad, FixtureConfig());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("ch9"), std::string::npos);
  }
}

TEST(ScoreCorpusTest, ThreadCountDoesNotMatter) {
  SynthSpec spec;
  spec.n_queries = 40;
  spec.items_per_query = 30;
  spec.dimension = 4;
  const auto corpus = Generate(spec);
  const auto config = ConfigForSpec(spec);
  EXPECT_EQ(FormatTargets(ScoreCorpus(corpus.records, config, 1)),
            FormatTargets(ScoreCorpus(corpus.records, config, 8)));
}

TEST(TargetsTest, RoundTripIsExact) {
  SynthSpec spec;
  spec.n_queries = 10;
  spec.items_per_query = 20;
  spec.dimension = 4;
  const auto corpus = Generate(spec);
  const auto targets = ScoreCorpus(corpus.records, ConfigForSpec(spec));
  const auto text = FormatTargets(targets);
  EXPECT_EQ(FormatTargets(ParseTargets(text, "t")), text);
}

TEST(SummarizeTest, CountsAddUp) {
  const auto summary = Summarize(ScoreCorpus(Fixture(), FixtureConfig()));
  EXPECT_EQ(summary.records, 3u);
  EXPECT_EQ(summary.positives, 2u);
  EXPECT_EQ(summary.negatives, 1u);
  EXPECT_EQ(summary.decisions[static_cast<std::size_t>(Decision::kHuman)], 3u);
  EXPECT_EQ(summary.rating_histogram, (std::array<std::size_t, 5>{0, 0, 1, 1, 1}));
}

TEST(RankByScoresTest, OrdersByTargetAndKeepsPool) {
  const auto config = FixtureConfig();
  const auto records = Fixture();
  const auto judged = JudgeCorpus(records, config);
  ASSERT_EQ(judged.size(), 2u);
  const auto lists = RankByScores(judged, ScoreCorpus(records, config), 1);
  ASSERT_EQ(lists.size(), 2u);
  EXPECT_EQ(lists[0].query_id, "q1");
  ASSERT_EQ(lists[0].items.size(), 1u);
  EXPECT_EQ(lists[0].items[0].item_id, "a");
  EXPECT_EQ(lists[0].ideal_pool.size(), 2u);
}

}  // namespace
}  // namespace unisup
