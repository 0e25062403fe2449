#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "unisup/datamodel.h"

namespace unisup {

// One JSON object per line:
//   {"query_id":..,"query_text":..,"item_id":..,"item_text":..,
//    "human_rating":int|null,"stage_distributions":[[5 reals],..]|null,
//    "channel_ranks":{"ch":rank,..},
//    "engagement":{"orders":..,"carts":..,"clicks":..,"views":..}}
std::string RecordToJson(const QipRecord& record);
QipRecord RecordFromJson(std::string_view line);

std::vector<QipRecord> ParseCorpus(std::string_view text,
                                   std::string_view origin = "<corpus>");
std::vector<QipRecord> LoadCorpus(const std::string& path);
std::string FormatCorpus(const std::vector<QipRecord>& records);

}  // namespace unisup
