#include "unisup/priors.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "unisup/error.h"

namespace unisup {

double ChannelPrior(std::int64_t rank, std::int64_t cap) {
  if (cap < 2) {
    ThrowValidation("channel cap must be >= 2, got " + std::to_string(cap));
  }
  if (rank < 1) {
    ThrowValidation("rank must be >= 1, got " + std::to_string(rank));
  }
  const double ratio = std::log(static_cast<double>(std::max<std::int64_t>(1, rank))) /
                       std::log(static_cast<double>(cap));
  return std::max(0.0, 1.0 - ratio);
}

PriorScore AggregatePriors(
    const std::map<std::string, std::int64_t>& channel_ranks,
    const PipelineConfig& config) {
  PriorScore score;
  for (const auto& [channel, rank] : channel_ranks) {
    const auto cap = config.channel_caps.find(channel);
    if (cap == config.channel_caps.end()) {
      ThrowValidation("unknown channel '" + channel + "'");
    }
    const double prior = ChannelPrior(rank, cap->second);
    score.per_channel.emplace(channel, prior);
    score.aggregated = std::max(score.aggregated, prior);
  }
  score.channels_hit = static_cast<int>(channel_ranks.size());
  if (!config.channel_caps.empty()) {
    score.consensus = static_cast<double>(score.channels_hit) /
                      static_cast<double>(config.channel_caps.size());
  }
  return score;
}

}  // namespace unisup
