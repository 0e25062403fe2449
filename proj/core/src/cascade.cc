#include "unisup/cascade.h"

#include <algorithm>
#include <array>
#include <string>

#include "unisup/error.h"

namespace unisup {

std::string_view DecisionName(Decision decision) {
  switch (decision) {
    case Decision::kHuman:
      return "human";
    case Decision::kEarlyAccept:
      return "early_accept";
    case Decision::kMajority:
      return "majority";
    case Decision::kFinalStageTiebreak:
      return "final_stage_tiebreak";
  }
  return "unknown";
}

int ArgmaxLabel(const StageDistribution& distribution,
                ArgmaxTieBreak tie_break) {
  int best = 0;
  for (int label = 1; label < kNumRatings; ++label) {
    const double p = distribution[label];
    if (p > distribution[best] ||
        (p == distribution[best] &&
         tie_break == ArgmaxTieBreak::kHigherLabel)) {
      best = label;
    }
  }
  return best;
}

CascadeVerdict Arbitrate(const QipRecord& record,
                         const PipelineConfig& config) {
  if (record.human_rating) {
    const int rating = *record.human_rating;
    if (rating < kMinRating || rating > kMaxRating) {
      ThrowValidation("human rating outside 0..4 for (" + record.query_id +
                      ", " + record.item_id + ")");
    }
    return {.rating = rating, .decided_by = Decision::kHuman};
  }
  const auto& stages = record.stage_distributions;
  if (stages.empty()) {
    ThrowValidation("no human rating or stage distributions for (" +
                    record.query_id + ", " + record.item_id + ")");
  }
  if (stages.size() != config.stage_thresholds.size()) {
    ThrowValidation("record (" + record.query_id + ", " + record.item_id +
                    ") has " + std::to_string(stages.size()) +
                    " stage distributions but config has " +
                    std::to_string(config.stage_thresholds.size()) +
                    " thresholds");
  }

  std::vector<int> labels(stages.size());
  for (std::size_t s = 0; s < stages.size(); ++s) {
    labels[s] = ArgmaxLabel(stages[s], config.argmax_tie_break);
    const double confidence = stages[s][labels[s]];
    if (confidence >= config.stage_thresholds[s]) {
      return {.rating = labels[s],
              .decided_by = Decision::kEarlyAccept,
              .accepted_stage = s,
              .accepted_stage_confidence = confidence};
    }
  }

  std::array<int, kNumRatings> votes{};
  for (int label : labels) ++votes[label];
  const int top = *std::max_element(votes.begin(), votes.end());
  const auto holders = std::count(votes.begin(), votes.end(), top);
  if (top >= 2 && holders == 1) {
    const auto winner = std::max_element(votes.begin(), votes.end()) - votes.begin();
    return {.rating = static_cast<int>(winner), .decided_by = Decision::kMajority};
  }
  return {.rating = labels.back(), .decided_by = Decision::kFinalStageTiebreak};
}

}  // namespace unisup
