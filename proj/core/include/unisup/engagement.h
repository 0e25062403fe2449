#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>

#include "unisup/datamodel.h"

namespace unisup {

struct EngagementScore {
  double raw = 0.0;         // log-compressed weighted counts
  double normalized = 0.0;  // raw / (query max + eps)
  double smoothed = 0.0;    // sigmoid(k * (normalized - 0.5))
};

// ln(1 + l1*orders + l2*carts + l3*clicks + l4*views).
double RawEngagement(const EngagementCounts& counts,
                     const std::array<double, 4>& lambdas);

double SmoothEngagement(double normalized, double sigmoid_k);

using ItemRaw = std::pair<std::string, double>;

// Normalizes one query's candidate set by its maximum raw value and applies
// the sigmoid. Throws on an empty set, a negative raw value or a repeated
// item id.
std::map<std::string, EngagementScore> NormalizeAndSmooth(
    std::span<const ItemRaw> raws, const PipelineConfig& config);

}  // namespace unisup
