#include "unisup/datamodel.h"

#include <cmath>
#include <string>

namespace unisup {
namespace {

constexpr double kDistributionTolerance = 1e-6;

void CheckNonNegative(double value, const char* name,
                      std::vector<std::string>& out) {
  if (!(value >= 0.0)) out.push_back(std::string(name) + " < 0");
}

}  // namespace

PipelineConfig LoadDefaultConfig() { return PipelineConfig{}; }

ValidationResult ValidateConfig(const PipelineConfig& config) {
  ValidationResult result;
  auto& v = result.violations;
  CheckNonNegative(config.alpha, "alpha", v);
  CheckNonNegative(config.beta, "beta", v);
  CheckNonNegative(config.gamma, "gamma", v);
  CheckNonNegative(config.mu_rel, "mu_rel", v);
  CheckNonNegative(config.lambda_eng, "lambda_eng", v);
  CheckNonNegative(config.kappa1, "kappa1", v);
  CheckNonNegative(config.kappa2, "kappa2", v);
  for (double lambda : config.lambda_counts) {
    CheckNonNegative(lambda, "lambda_counts entry", v);
  }
  if (!std::isfinite(config.sigmoid_k)) v.push_back("sigmoid_k not finite");
  if (!(config.epsilon_norm > 0.0)) v.push_back("epsilon_norm <= 0");
  for (const auto& [channel, cap] : config.channel_caps) {
    if (cap < 2) v.push_back("channel cap < 2 for '" + channel + "'");
  }
  if (config.stage_thresholds.empty()) v.push_back("no stage thresholds");
  for (double t : config.stage_thresholds) {
    if (!(t > 0.0 && t <= 1.0)) v.push_back("stage threshold outside (0,1]");
  }
  if (config.k_eval < 1) v.push_back("k_eval < 1");
  if (config.relevant_threshold < kMinRating ||
      config.relevant_threshold > kMaxRating) {
    v.push_back("relevant_threshold outside 0..4");
  }
  if (config.temperature_schedule.empty()) {
    v.push_back("empty temperature_schedule");
  }
  for (double t : config.temperature_schedule) {
    if (!(t > 0.0)) v.push_back("temperature <= 0");
  }
  if (config.negatives_per_positive < 0) {
    v.push_back("negatives_per_positive < 0");
  }
  for (double c : config.density_cutoffs) {
    if (!(c >= 0.0 && c <= 100.0)) v.push_back("density cutoff outside [0,100]");
  }
  return result;
}

ValidationResult ValidateRecord(const QipRecord& record,
                                const PipelineConfig& config) {
  ValidationResult result;
  auto& v = result.violations;
  if (record.human_rating &&
      (*record.human_rating < kMinRating || *record.human_rating > kMaxRating)) {
    v.push_back("human_rating outside 0..4");
  }
  for (std::size_t s = 0; s < record.stage_distributions.size(); ++s) {
    const auto& dist = record.stage_distributions[s];
    double sum = 0.0;
    bool negative = false;
    for (double p : dist) {
      sum += p;
      if (!(p >= 0.0)) negative = true;
    }
    const std::string where = " (stage " + std::to_string(s) + ")";
    if (negative) v.push_back("negative probability" + where);
    if (!(std::abs(sum - 1.0) <= kDistributionTolerance)) {
      v.push_back("distribution does not sum to 1" + where);
    }
  }
  for (const auto& [channel, rank] : record.channel_ranks) {
    if (rank < 1) v.push_back("rank < 1 (channel '" + channel + "')");
    if (!config.channel_caps.contains(channel)) {
      v.push_back("unknown channel '" + channel + "'");
    }
  }
  const auto& e = record.engagement;
  if (e.orders < 0 || e.carts < 0 || e.clicks < 0 || e.views < 0) {
    v.push_back("negative engagement count");
  }
  if (!record.human_rating && record.stage_distributions.empty()) {
    v.push_back("no human rating and no stage distributions");
  }
  return result;
}

}  // namespace unisup
