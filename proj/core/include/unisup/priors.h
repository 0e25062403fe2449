#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "unisup/datamodel.h"

namespace unisup {

struct PriorScore {
  std::map<std::string, double> per_channel;
  double aggregated = 0.0;  // max of per_channel, 0 if empty
  double consensus = 0.0;   // channels_hit / |channels|
  int channels_hit = 0;
};

// max(0, 1 - ln(max(1, rank)) / ln(cap)). Throws if rank < 1 or cap < 2.
double ChannelPrior(std::int64_t rank, std::int64_t cap);

// Items retrieved by no channel get aggregated = consensus = 0.
// Throws on a channel id missing from config.channel_caps.
PriorScore AggregatePriors(
    const std::map<std::string, std::int64_t>& channel_ranks,
    const PipelineConfig& config);

}  // namespace unisup
