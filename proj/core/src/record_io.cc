#include "unisup/record_io.h"

#include <json.hpp>

#include "unisup/error.h"
#include "unisup/kv_file.h"

namespace unisup {
namespace {

using nlohmann::ordered_json;

ordered_json RecordJson(const QipRecord& record) {
  ordered_json j;
  j["query_id"] = record.query_id;
  j["query_text"] = record.query_text;
  j["item_id"] = record.item_id;
  j["item_text"] = record.item_text;
  j["human_rating"] = record.human_rating ? ordered_json(*record.human_rating)
                                          : ordered_json(nullptr);
  if (record.stage_distributions.empty()) {
    j["stage_distributions"] = nullptr;
  } else {
    auto stages = ordered_json::array();
    for (const auto& dist : record.stage_distributions) {
      stages.push_back(ordered_json(dist));
    }
    j["stage_distributions"] = std::move(stages);
  }
  auto ranks = ordered_json::object();
  for (const auto& [channel, rank] : record.channel_ranks) ranks[channel] = rank;
  j["channel_ranks"] = std::move(ranks);
  j["engagement"] = {{"orders", record.engagement.orders},
                     {"carts", record.engagement.carts},
                     {"clicks", record.engagement.clicks},
                     {"views", record.engagement.views}};
  return j;
}

std::int64_t CountField(const ordered_json& engagement, const char* name) {
  if (!engagement.contains(name) || engagement[name].is_null()) return 0;
  return engagement[name].get<std::int64_t>();
}

}  // namespace

std::string RecordToJson(const QipRecord& record) {
  return RecordJson(record).dump();
}

QipRecord RecordFromJson(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    ThrowValidation(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) ThrowValidation("record is not a JSON object");
  QipRecord record;
  try {
    record.query_id = j.at("query_id").get<std::string>();
    record.item_id = j.at("item_id").get<std::string>();
    record.query_text = j.value("query_text", std::string());
    record.item_text = j.value("item_text", std::string());
    if (j.contains("human_rating") && !j["human_rating"].is_null()) {
      record.human_rating = j["human_rating"].get<int>();
    }
    if (j.contains("stage_distributions") &&
        !j["stage_distributions"].is_null()) {
      for (const auto& stage : j["stage_distributions"]) {
        if (!stage.is_array() || stage.size() != kNumRatings) {
          ThrowValidation("stage distribution must have 5 entries");
        }
        record.stage_distributions.push_back(stage.get<StageDistribution>());
      }
    }
    if (j.contains("channel_ranks") && !j["channel_ranks"].is_null()) {
      for (const auto& [channel, rank] : j["channel_ranks"].items()) {
        record.channel_ranks[channel] = rank.get<std::int64_t>();
      }
    }
    if (j.contains("engagement") && !j["engagement"].is_null()) {
      const auto& e = j["engagement"];
      record.engagement = {CountField(e, "orders"), CountField(e, "carts"),
                           CountField(e, "clicks"), CountField(e, "views")};
    }
  } catch (const ordered_json::exception& e) {
    ThrowValidation(std::string("bad record field: ") + e.what());
  }
  return record;
}

std::vector<QipRecord> ParseCorpus(std::string_view text,
                                   std::string_view origin) {
  std::vector<QipRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      records.push_back(RecordFromJson(line));
    } catch (const Error& e) {
      ThrowValidation(std::string(origin) + ":" + std::to_string(line_no) +
                      ": " + e.what());
    }
  }
  return records;
}

std::vector<QipRecord> LoadCorpus(const std::string& path) {
  return ParseCorpus(ReadTextFile(path), path);
}

std::string FormatCorpus(const std::vector<QipRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += RecordToJson(r);
    out += '\n';
  }
  return out;
}

}  // namespace unisup
