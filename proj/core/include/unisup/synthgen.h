#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unisup/datamodel.h"
#include "unisup/evalkit.h"

namespace unisup {

struct SynthSpec {
  int n_queries = 200;
  int items_per_query = 100;
  int dimension = 32;
  // Probability of planted ratings 0..4.
  std::array<double, kNumRatings> rating_mixture = {0.10, 0.15, 0.15, 0.25,
                                                    0.35};
  // Correlation between rating and latent popularity among positives.
  double engagement_relevance_correlation = 0.0;
  // Std-dev of the per-channel score noise, in rating units.
  double channel_noise = 1.0;
  std::uint64_t seed = 7;

  std::vector<std::string> channels = {"ch0", "ch1", "ch2"};
  // Fraction of candidates each channel returns (best first).
  double channel_depth = 0.6;
  // Number of classifier stages per record.
  int stages = 3;
  // Fraction of records that carry a human rating.
  double human_label_fraction = 0.3;
  // Mean peak probability of a stage distribution.
  double stage_confidence = 0.8;
  // Probability that a stage peaks on a neighbouring label.
  double stage_label_noise = 0.1;
  // Std-dev of the jitter on the planted query-item cosine.
  double embedding_noise = 0.05;
  // Lognormal view model.
  double views_log_mean = 5.0;
  double views_log_sigma = 1.0;

  bool operator==(const SynthSpec&) const = default;
};

// Throws Error(kValidation) listing every problem.
void ValidateSynthSpec(const SynthSpec& spec);

SynthSpec ParseSynthSpec(std::string_view text,
                         std::string_view origin = "<spec>");
SynthSpec LoadSynthSpec(const std::string& path);
std::string FormatSynthSpec(const SynthSpec& spec);

struct SynthCorpus {
  std::vector<QipRecord> records;  // grouped by query, queries in order
  std::vector<int> planted_ratings;  // aligned with records
  EmbeddingTable items;
  EmbeddingTable queries;
};

// Deterministic given spec (including its seed).
SynthCorpus Generate(const SynthSpec& spec);

// A default PipelineConfig whose channel caps cover the spec's channels.
PipelineConfig ConfigForSpec(const SynthSpec& spec);

}  // namespace unisup
