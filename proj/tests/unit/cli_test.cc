#include "cli.h"

#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "test_util.h"
#include "unisup/evalkit.h"
#include "unisup/kv_file.h"
#include "unisup/synthgen.h"

namespace unisup {
namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "unisup");
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::Run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::uint64_t HashFile(const std::string& path) {
  return testing::Fnv1a(ReadTextFile(path));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthSpec spec;
    spec.n_queries = 15;
    spec.items_per_query = 40;
    spec.dimension = 8;
    WriteTextFile(dir_.file("spec.txt"), FormatSynthSpec(spec));
  }
  std::string Path(const std::string& name) const { return dir_.file(name); }

  testing::TempDir dir_{"cli"};
};

TEST_F(CliTest, SynthWritesFilesDeterministically) {
  ASSERT_EQ(Invoke({"synth", "--spec", Path("spec.txt"), "--out", Path("a")}).code, 0);
  ASSERT_EQ(Invoke({"synth", "--spec", Path("spec.txt"), "--out", Path("b")}).code, 0);
  for (const char* f : {"corpus.jsonl", "items.emb", "queries.emb", "config.txt"}) {
    EXPECT_EQ(HashFile(Path(std::string("a/") + f)), HashFile(Path(std::string("b/") + f))) << f;
  }
  const auto o = Invoke({"synth", "--spec", Path("spec.txt"), "--out", Path("c"), "--seed", "99"});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(nlohmann::json::parse(o.out).at("records"), 600);
  EXPECT_NE(HashFile(Path("a/corpus.jsonl")), HashFile(Path("c/corpus.jsonl")));
}

TEST_F(CliTest, MissingSpecNamesPath) {
  const auto o = Invoke({"synth", "--spec", Path("nope.txt"), "--out", Path("a")});
  EXPECT_NE(o.code, 0);
  EXPECT_NE(o.err.find(Path("nope.txt")), std::string::npos);
}

TEST_F(CliTest, UnknownFlagPrintsUsage) {
  const auto o = Invoke({"evaluate", "--corpus", "x", "--out", "y", "--bogus", "1"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE((o.out + o.err).find("--corpus"), std::string::npos);
  EXPECT_EQ(Invoke({}).code, 1);
  EXPECT_EQ(Invoke({"--help"}).code, 0);
}

TEST_F(CliTest, ScoreEmptyCorpus) {
  WriteTextFile(Path("empty.jsonl"), "");
  const auto o = Invoke({"score", "--in", Path("empty.jsonl"), "--out", Path("t.jsonl")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(ReadTextFile(Path("t.jsonl")), "");
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j.at("records"), 0);
  EXPECT_EQ(j.at("positives"), 0);
}

TEST_F(CliTest, ScoreRejectsBadInput) {
  WriteTextFile(Path("bad.jsonl"), "{not json\n");
  EXPECT_EQ(Invoke({"score", "--in", Path("bad.jsonl"), "--out", Path("t.jsonl")}).code, 2);
  EXPECT_EQ(Invoke({"score", "--in", Path("bad.jsonl"), "--out", Path("t.jsonl"),
                    "--ablation", "mystery"}).code, 1);
}

TEST_F(CliTest, RelOnlyAblation) {
  ASSERT_EQ(Invoke({"synth", "--spec", Path("spec.txt"), "--out", Path("s")}).code, 0);
  const std::vector<std::string> base = {"score", "--in", Path("s/corpus.jsonl"),
                                         "--config", Path("s/config.txt")};
  auto fused = base, rel = base;
  fused.insert(fused.end(), {"--out", Path("fused.jsonl")});
  rel.insert(rel.end(), {"--out", Path("rel.jsonl"), "--ablation", "rel-only"});
  ASSERT_EQ(Invoke(fused).code, 0);
  ASSERT_EQ(Invoke(rel).code, 0);
  const auto text = ReadTextFile(Path("rel.jsonl"));
  EXPECT_NE(text, ReadTextFile(Path("fused.jsonl")));
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.at("polarity") != "positive") continue;
    EXPECT_EQ(j.at("target").get<double>(),
              std::clamp(j.at("rel_rank").get<double>(), 0.0, 1.0));
  }
}

TEST_F(CliTest, EvaluateDefaultsAndRecount) {
  ASSERT_EQ(Invoke({"synth", "--spec", Path("spec.txt"), "--out", Path("s")}).code, 0);
  const auto o = Invoke({"evaluate", "--corpus", Path("s/corpus.jsonl"), "--embeddings",
                         Path("s/items.emb"), "--config", Path("s/config.txt"), "--out",
                         Path("eval")});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto report = nlohmann::json::parse(ReadTextFile(Path("eval/report.json")));
  EXPECT_EQ(report.at("k"), 25);
  EXPECT_EQ(report.at("queries"), 15);

  std::vector<double> cutoffs;
  const auto rows = ParseMetricTable(ReadTextFile(Path("eval/per_query.tsv")), &cutoffs, "t");
  ASSERT_EQ(rows.size(), 15u);
  double rel = 0, precision = 0, ndcg = 0, share50 = 0;
  for (const auto& r : rows) {
    rel += r.avg_relevance;
    precision += r.precision;
    ndcg += r.ndcg;
    share50 += r.density[4];
  }
  EXPECT_EQ(cutoffs[4], 50.0);
  EXPECT_NEAR(report.at("avg_relevance").get<double>(), rel / 15, 1e-12);
  EXPECT_NEAR(report.at("precision").get<double>(), precision / 15, 1e-12);
  EXPECT_NEAR(report.at("ndcg").get<double>(), ndcg / 15, 1e-12);
  EXPECT_NEAR(report.at("engagement_density").at("50").get<double>(), share50 / 15, 1e-12);
}

TEST_F(CliTest, EvaluateNeedsASource) {
  ASSERT_EQ(Invoke({"synth", "--spec", Path("spec.txt"), "--out", Path("s")}).code, 0);
  EXPECT_EQ(Invoke({"evaluate", "--corpus", Path("s/corpus.jsonl"), "--out", Path("e")}).code, 1);
}

TEST_F(CliTest, CompareIdenticalAndSwapped) {
  ASSERT_EQ(Invoke({"synth", "--spec", Path("spec.txt"), "--out", Path("s")}).code, 0);
  ASSERT_EQ(Invoke({"score", "--in", Path("s/corpus.jsonl"), "--config", Path("s/config.txt"),
                    "--out", Path("t.jsonl")}).code, 0);
  const std::vector<std::string> eval = {"evaluate", "--corpus", Path("s/corpus.jsonl"),
                                         "--config", Path("s/config.txt")};
  auto a = eval, b = eval;
  a.insert(a.end(), {"--embeddings", Path("s/items.emb"), "--out", Path("ra")});
  b.insert(b.end(), {"--scores", Path("t.jsonl"), "--out", Path("rb")});
  ASSERT_EQ(Invoke(a).code, 0);
  ASSERT_EQ(Invoke(b).code, 0);

  const auto same = nlohmann::json::parse(Invoke({"compare", "--run-a", Path("ra"), "--run-b", Path("ra")}).out);
  for (const auto& [name, m] : same.at("metrics").items()) EXPECT_EQ(m.at("delta"), 0.0) << name;

  const auto ab = nlohmann::json::parse(Invoke({"compare", "--run-a", Path("ra"), "--run-b", Path("rb")}).out);
  ASSERT_EQ(Invoke({"compare", "--run-a", Path("rb/per_query.tsv"), "--run-b", Path("ra"),
                    "--out", Path("ba.json")}).code, 0);
  const auto ba = nlohmann::json::parse(ReadTextFile(Path("ba.json")));
  for (const auto& [name, m] : ab.at("metrics").items()) {
    EXPECT_EQ(m.at("delta").get<double>(), -ba.at("metrics").at(name).at("delta").get<double>()) << name;
  }
  EXPECT_EQ(Invoke({"compare", "--run-a", Path("ra"), "--run-b", Path("missing")}).code, 3);
}

TEST_F(CliTest, SampleDeterministicAcrossThreads) {
  ASSERT_EQ(Invoke({"synth", "--spec", Path("spec.txt"), "--out", Path("s")}).code, 0);
  ASSERT_EQ(Invoke({"score", "--in", Path("s/corpus.jsonl"), "--config", Path("s/config.txt"),
                    "--out", Path("t.jsonl")}).code, 0);
  ASSERT_EQ(Invoke({"sample", "--targets", Path("t.jsonl"), "--seed", "5", "--out",
                    Path("d1.jsonl")}).code, 0);
  ASSERT_EQ(Invoke({"sample", "--targets", Path("t.jsonl"), "--seed", "5", "--threads", "8",
                    "--out", Path("d8.jsonl")}).code, 0);
  EXPECT_EQ(HashFile(Path("d1.jsonl")), HashFile(Path("d8.jsonl")));
  EXPECT_EQ(Invoke({"sample", "--targets", Path("t.jsonl"), "--out", Path("x.jsonl")}).code, 1);
  EXPECT_EQ(Invoke({"sample", "--targets", Path("t.jsonl"), "--seed", "5", "--temperature", "0",
                    "--out", Path("x.jsonl")}).code, 1);
}

}  // namespace
}  // namespace unisup
