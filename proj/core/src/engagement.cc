#include "unisup/engagement.h"

#include <algorithm>
#include <cmath>

#include "unisup/error.h"

namespace unisup {

double RawEngagement(const EngagementCounts& counts,
                     const std::array<double, 4>& lambdas) {
  const double weighted = lambdas[0] * static_cast<double>(counts.orders) +
                          lambdas[1] * static_cast<double>(counts.carts) +
                          lambdas[2] * static_cast<double>(counts.clicks) +
                          lambdas[3] * static_cast<double>(counts.views);
  return std::log1p(weighted);
}

double SmoothEngagement(double normalized, double sigmoid_k) {
  return 1.0 / (1.0 + std::exp(-sigmoid_k * (normalized - 0.5)));
}

std::map<std::string, EngagementScore> NormalizeAndSmooth(
    std::span<const ItemRaw> raws, const PipelineConfig& config) {
  if (raws.empty()) ThrowValidation("empty engagement candidate set");
  double max_raw = 0.0;
  for (const auto& [item, raw] : raws) {
    if (!(raw >= 0.0)) {
      ThrowValidation("negative raw engagement for item '" + item + "'");
    }
    max_raw = std::max(max_raw, raw);
  }
  const double denominator = max_raw + config.epsilon_norm;
  std::map<std::string, EngagementScore> out;
  for (const auto& [item, raw] : raws) {
    EngagementScore score;
    score.raw = raw;
    score.normalized = raw / denominator;
    score.smoothed = SmoothEngagement(score.normalized, config.sigmoid_k);
    if (!out.emplace(item, score).second) {
      ThrowValidation("item '" + item + "' repeated in candidate set");
    }
  }
  return out;
}

}  // namespace unisup
