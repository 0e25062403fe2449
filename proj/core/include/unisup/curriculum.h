#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unisup/datamodel.h"
#include "unisup/fusion.h"

namespace unisup {

// Keeps zero-difficulty negatives sampleable.
inline constexpr double kDifficultyFloor = 1e-6;

struct PlanEntry {
  std::string item_id;
  double weight = 0.0;       // difficulty + floor
  double probability = 0.0;  // weight^(1/T) / sum
};

struct QueryPlan {
  std::size_t positives = 0;
  std::vector<PlanEntry> negatives;
};

struct SamplingPlan {
  std::map<std::string, QueryPlan> per_query;
  double temperature = 1.0;
  int negatives_per_positive = 4;
  // Queries that need negatives but have none. The plan is still usable.
  std::vector<std::string> issues;
};

// Temperature for a 0-based epoch; epochs past the schedule reuse its end.
double TemperatureForEpoch(const PipelineConfig& config, std::size_t epoch);

// Probabilities proportional to weight^(1/temperature), computed in log space
// so small temperatures stay finite.
std::vector<double> TemperedProbabilities(std::span<const double> weights,
                                          double temperature);

// Throws if temperature <= 0 or negatives_per_positive < 0.
SamplingPlan BuildPlan(std::span<const SupervisionTarget> targets,
                       double temperature, int negatives_per_positive,
                       const PipelineConfig& config);

using SampledPair = std::pair<std::string, std::string>;  // query, item

// Per-query seed: depends only on the run seed and the query id.
std::uint64_t QuerySeed(std::uint64_t seed, std::string_view query_id);

// Draws negatives_per_positive * positives negatives per query without
// replacement (or all of them if fewer exist). The first draw of each query
// follows the plan probabilities exactly. Output is grouped by query id in
// ascending order, each group in draw order, independent of `threads`.
std::vector<SampledPair> Sample(const SamplingPlan& plan, std::uint64_t seed,
                                int threads = 1);

struct DatasetSummary {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::array<std::size_t, kNumRatings> rating_histogram{};

  std::size_t total() const { return positives + negatives; }
  bool operator==(const DatasetSummary&) const = default;
};

// Training records: every positive plus every sampled negative, in the order
// of `targets`.
std::string FormatDataset(std::span<const SupervisionTarget> targets,
                          std::span<const SampledPair> sampled,
                          DatasetSummary* summary);

// Writes FormatDataset output to `path`; I/O errors name the path.
DatasetSummary EmitDataset(std::span<const SupervisionTarget> targets,
                           std::span<const SampledPair> sampled,
                           const std::string& path);

std::string SummaryToJson(const DatasetSummary& summary);

}  // namespace unisup
