#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "unisup/cascade.h"
#include "unisup/datamodel.h"
#include "unisup/engagement.h"
#include "unisup/priors.h"

namespace unisup {

enum class Polarity { kPositive, kNegative };

std::string_view PolarityName(Polarity polarity);

// Supervision for one QIP. Identity fields are carried along so targets can
// be written out and sampled without the source corpus.
struct SupervisionTarget {
  std::string query_id;
  std::string item_id;
  std::string query_text;
  std::string item_text;
  int rating = 0;
  Decision decided_by = Decision::kHuman;

  Polarity polarity = Polarity::kNegative;
  double rel_score = 0.0;
  std::optional<double> rel_rank;    // positives only
  double target = 0.0;
  std::optional<double> difficulty;  // negatives only
  double token_similarity = 0.0;

  double prior = 0.0;
  double consensus = 0.0;
  int channels_hit = 0;
  double engagement = 0.0;  // smoothed engagement

  bool operator==(const SupervisionTarget&) const = default;
};

bool IsPositiveRating(int rating);

// (rating - 2) / 2. Throws outside 0..4.
double NormalizeRating(int rating);

// Jaccard similarity of lowercase alphanumeric token sets. Bytes >= 0x80 are
// kept inside tokens so UTF-8 words survive intact. Two empty sets give 0.
double TokenSimilarity(std::string_view query_text, std::string_view item_text);

struct PositiveScore {
  double rel_rank = 0.0;
  double target = 0.0;
};

// rel_rank = alpha*rel + beta*prior + gamma*consensus;
// target = clip(mu_rel*rel_rank + lambda_eng*engagement, 0, 1).
// Throws if rel_score < 0.5 or smoothed_engagement is outside [0, 1].
PositiveScore FusePositive(double rel_score, const PriorScore& prior,
                           double smoothed_engagement,
                           const PipelineConfig& config);

struct NegativeScore {
  double difficulty = 0.0;
  double target = 0.0;
};

// difficulty = kappa1*prior + kappa2*token_sim; target = rel_score.
// Throws if rel_score > 0.
NegativeScore ScoreNegative(double rel_score, const PriorScore& prior,
                            double token_sim, const PipelineConfig& config);

SupervisionTarget BuildTarget(const QipRecord& record,
                              const CascadeVerdict& verdict,
                              const PriorScore& prior,
                              const EngagementScore& engagement,
                              const PipelineConfig& config);

}  // namespace unisup
