#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unisup/cascade.h"
#include "unisup/curriculum.h"
#include "unisup/datamodel.h"
#include "unisup/evalkit.h"
#include "unisup/fusion.h"

namespace unisup {

// Record indices grouped by query id, groups in order of first appearance.
std::vector<std::vector<std::size_t>> GroupByQuery(
    std::span<const QipRecord> records);

// Validates every record, then arbitrates, scores priors, normalizes
// engagement within each query and builds targets. Output is aligned with
// the input. Throws Error(kValidation) naming the first offending records.
std::vector<SupervisionTarget> ScoreCorpus(std::span<const QipRecord> records,
                                           const PipelineConfig& config,
                                           int threads = 1);

// Rel-only ablation: mu_rel = 1, lambda_eng = 0.
PipelineConfig RelOnly(PipelineConfig config);

struct ScoreSummary {
  std::size_t records = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::array<std::size_t, kNumRatings> rating_histogram{};
  std::array<std::size_t, 4> decisions{};  // indexed by Decision
};

ScoreSummary Summarize(std::span<const SupervisionTarget> targets);
std::string ScoreSummaryToJson(const ScoreSummary& summary);

// JSON lines of every SupervisionTarget field.
std::string TargetToJson(const SupervisionTarget& target);
SupervisionTarget TargetFromJson(std::string_view line);
std::string FormatTargets(std::span<const SupervisionTarget> targets);
std::vector<SupervisionTarget> ParseTargets(std::string_view text,
                                            std::string_view origin);

// Judged view of one query: arbitrated ratings and engagement percentiles
// over the full candidate set.
struct JudgedQuery {
  std::string query_id;
  std::vector<std::string> item_ids;
  std::vector<int> ratings;
  std::vector<double> engagement_percentiles;
};

std::vector<JudgedQuery> JudgeCorpus(std::span<const QipRecord> records,
                                     const PipelineConfig& config,
                                     int threads = 1);

// Exact cosine top-k over `items` for every judged query. Retrieved items
// outside the query's candidate set are judged 0 with percentile 0, and a
// zero joins the ideal pool for each of them.
std::vector<RankedList> RetrieveByEmbedding(std::span<const JudgedQuery> judged,
                                            const EmbeddingTable& items,
                                            const EmbeddingTable& queries,
                                            std::size_t k, int threads = 1);

// Orders each query's candidates by a per-pair score (descending, ties by
// item id) and keeps the top k. Used to rank by supervision targets directly.
// Candidates without a score are ranked last.
std::vector<RankedList> RankByScores(
    std::span<const JudgedQuery> judged,
    std::span<const SupervisionTarget> scored, std::size_t k);

struct EvaluationOutput {
  std::vector<QueryMetrics> per_query;
  MetricSummary summary;
};

EvaluationOutput EvaluateRuns(std::span<const RankedList> lists,
                              const PipelineConfig& config, int threads = 1);

std::string EvaluationReportToJson(const EvaluationOutput& output,
                                   const PipelineConfig& config,
                                   std::size_t k);

}  // namespace unisup
