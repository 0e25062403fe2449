#include "unisup/fusion.h"

#include <algorithm>
#include <set>
#include <string>

#include "unisup/error.h"

namespace unisup {
namespace {

bool IsTokenByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::set<std::string> Tokens(std::string_view text) {
  std::set<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (IsTokenByte(c)) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                        : static_cast<char>(c);
    } else if (!current.empty()) {
      tokens.insert(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.insert(std::move(current));
  return tokens;
}

}  // namespace

std::string_view PolarityName(Polarity polarity) {
  return polarity == Polarity::kPositive ? "positive" : "negative";
}

bool IsPositiveRating(int rating) { return rating >= 3; }

double NormalizeRating(int rating) {
  if (rating < kMinRating || rating > kMaxRating) {
    ThrowValidation("rating outside 0..4: " + std::to_string(rating));
  }
  return (rating - 2) / 2.0;
}

double TokenSimilarity(std::string_view query_text,
                       std::string_view item_text) {
  const auto a = Tokens(query_text);
  const auto b = Tokens(item_text);
  if (a.empty() && b.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& token : a) shared += b.count(token);
  const std::size_t united = a.size() + b.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(united);
}

PositiveScore FusePositive(double rel_score, const PriorScore& prior,
                           double smoothed_engagement,
                           const PipelineConfig& config) {
  if (!(rel_score >= 0.5)) {
    ThrowValidation("FusePositive called with non-positive rel_score " +
                    std::to_string(rel_score));
  }
  if (!(smoothed_engagement >= 0.0 && smoothed_engagement <= 1.0)) {
    ThrowValidation("smoothed engagement outside [0,1]");
  }
  PositiveScore out;
  out.rel_rank = config.alpha * rel_score + config.beta * prior.aggregated +
                 config.gamma * prior.consensus;
  out.target = std::clamp(
      config.mu_rel * out.rel_rank + config.lambda_eng * smoothed_engagement,
      0.0, 1.0);
  return out;
}

NegativeScore ScoreNegative(double rel_score, const PriorScore& prior,
                            double token_sim, const PipelineConfig& config) {
  if (!(rel_score <= 0.0)) {
    ThrowValidation("ScoreNegative called with positive rel_score " +
                    std::to_string(rel_score));
  }
  return {.difficulty = config.kappa1 * prior.aggregated + config.kappa2 * token_sim,
          .target = rel_score};
}

SupervisionTarget BuildTarget(const QipRecord& record,
                              const CascadeVerdict& verdict,
                              const PriorScore& prior,
                              const EngagementScore& engagement,
                              const PipelineConfig& config) {
  SupervisionTarget t;
  t.query_id = record.query_id;
  t.item_id = record.item_id;
  t.query_text = record.query_text;
  t.item_text = record.item_text;
  t.rating = verdict.rating;
  t.decided_by = verdict.decided_by;
  t.rel_score = NormalizeRating(verdict.rating);
  t.token_similarity = TokenSimilarity(record.query_text, record.item_text);
  t.prior = prior.aggregated;
  t.consensus = prior.consensus;
  t.channels_hit = prior.channels_hit;
  t.engagement = engagement.smoothed;
  if (IsPositiveRating(verdict.rating)) {
    const auto fused = FusePositive(t.rel_score, prior, engagement.smoothed, config);
    t.polarity = Polarity::kPositive;
    t.rel_rank = fused.rel_rank;
    t.target = fused.target;
  } else {
    const auto scored = ScoreNegative(t.rel_score, prior, t.token_similarity, config);
    t.polarity = Polarity::kNegative;
    t.difficulty = scored.difficulty;
    t.target = scored.target;
  }
  return t;
}

}  // namespace unisup
