#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace unisup {

inline constexpr int kNumRatings = 5;
inline constexpr int kMinRating = 0;
inline constexpr int kMaxRating = 4;

// Five-class predictive distribution over ratings 0..4.
using StageDistribution = std::array<double, kNumRatings>;

struct EngagementCounts {
  std::int64_t orders = 0;
  std::int64_t carts = 0;
  std::int64_t clicks = 0;
  std::int64_t views = 0;

  bool operator==(const EngagementCounts&) const = default;
};

// One query-item pair. An empty stage_distributions vector means the record
// carries no classifier evidence.
struct QipRecord {
  std::string query_id;
  std::string query_text;
  std::string item_id;
  std::string item_text;
  std::optional<int> human_rating;
  std::vector<StageDistribution> stage_distributions;  // cheapest first
  std::map<std::string, std::int64_t> channel_ranks;   // channel -> rank >= 1
  EngagementCounts engagement;

  bool operator==(const QipRecord&) const = default;
};

enum class NdcgGain { kLinear, kExponential };

// Which label wins when a stage distribution has several maximal classes.
enum class ArgmaxTieBreak { kHigherLabel, kLowerLabel };

struct PipelineConfig {
  // Fused relevance-rank weights.
  double alpha = 0.6;
  double beta = 0.3;
  double gamma = 0.1;
  // Engagement-augmented target weights.
  double mu_rel = 0.85;
  double lambda_eng = 0.15;
  // Negative difficulty weights.
  double kappa1 = 0.7;
  double kappa2 = 0.3;
  // Orders, carts, clicks, views.
  std::array<double, 4> lambda_counts = {1.5, 0.3, 0.1, 0.01};
  double sigmoid_k = 8.0;
  double epsilon_norm = 1e-8;
  std::map<std::string, std::int64_t> channel_caps = {
      {"ch0", 1000}, {"ch1", 1000}, {"ch2", 1000}};
  std::vector<double> stage_thresholds = {0.9, 0.85, 0.8};
  ArgmaxTieBreak argmax_tie_break = ArgmaxTieBreak::kHigherLabel;
  int k_eval = 25;
  int relevant_threshold = 3;
  NdcgGain ndcg_gain = NdcgGain::kLinear;
  std::uint64_t rng_seed = 20240601;
  // Curriculum: one temperature per epoch; the last entry repeats.
  std::vector<double> temperature_schedule = {1.0};
  int negatives_per_positive = 4;
  // Engagement percentile cutoffs for the density curve.
  std::vector<double> density_cutoffs = {10, 20, 30, 40, 50, 60, 70, 80, 90};

  bool operator==(const PipelineConfig&) const = default;
};

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

PipelineConfig LoadDefaultConfig();

// Checks every PipelineConfig invariant.
ValidationResult ValidateConfig(const PipelineConfig& config);

// Record invariants plus membership of every channel in config.channel_caps.
// Violations are returned as data, never thrown.
ValidationResult ValidateRecord(const QipRecord& record,
                                const PipelineConfig& config);

}  // namespace unisup
