#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "unisup/datamodel.h"

namespace unisup {

enum class Decision {
  kHuman,
  kEarlyAccept,
  kMajority,
  kFinalStageTiebreak,
};

std::string_view DecisionName(Decision decision);

struct CascadeVerdict {
  int rating = 0;
  Decision decided_by = Decision::kHuman;
  // Set only for kEarlyAccept.
  std::optional<std::size_t> accepted_stage;
  std::optional<double> accepted_stage_confidence;

  bool operator==(const CascadeVerdict&) const = default;
};

// Most probable label of one stage.
int ArgmaxLabel(const StageDistribution& distribution, ArgmaxTieBreak tie_break);

// Final rating for a record. A human rating always wins. Otherwise stages are
// consulted cheapest first and the first whose max probability reaches its
// threshold decides. When none does, a label held by at least two stages and
// by strictly more stages than any other label wins; failing that, the last
// stage decides.
//
// Throws Error(kValidation) when the record has no evidence or when the stage
// count differs from config.stage_thresholds.
CascadeVerdict Arbitrate(const QipRecord& record, const PipelineConfig& config);

}  // namespace unisup
