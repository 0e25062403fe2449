#include "unisup/pipeline.h"

#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "unisup/engagement.h"
#include "unisup/error.h"
#include "unisup/kv_file.h"
#include "unisup/parallel.h"
#include "unisup/priors.h"

namespace unisup {
namespace {

using nlohmann::ordered_json;

constexpr std::size_t kMaxReportedViolations = 5;

ordered_json OptionalNumber(const std::optional<double>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

Decision DecisionFromName(std::string_view name) {
  for (auto d : {Decision::kHuman, Decision::kEarlyAccept, Decision::kMajority,
                 Decision::kFinalStageTiebreak}) {
    if (DecisionName(d) == name) return d;
  }
  ThrowValidation("unknown decided_by '" + std::string(name) + "'");
}

std::optional<double> OptionalField(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

std::vector<std::vector<std::size_t>> GroupByQuery(
    std::span<const QipRecord> records) {
  std::vector<std::vector<std::size_t>> groups;
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto [it, inserted] = slot.emplace(records[i].query_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

std::vector<SupervisionTarget> ScoreCorpus(std::span<const QipRecord> records,
                                           const PipelineConfig& config,
                                           int threads) {
  const auto config_check = ValidateConfig(config);
  if (!config_check.ok()) {
    ThrowValidation("invalid config: " + config_check.violations.front());
  }
  std::string problems;
  std::size_t reported = 0;
  for (const auto& r : records) {
    const auto check = ValidateRecord(r, config);
    for (const auto& v : check.violations) {
      if (reported++ < kMaxReportedViolations) {
        problems += "\n  (" + r.query_id + ", " + r.item_id + "): " + v;
      }
    }
  }
  if (reported > 0) {
    ThrowValidation(std::to_string(reported) + " record violation(s):" + problems);
  }

  const auto groups = GroupByQuery(records);
  std::vector<SupervisionTarget> out(records.size());
  ParallelFor(groups.size(), threads, [&](std::size_t g) {
    const auto& members = groups[g];
    std::vector<ItemRaw> raws;
    raws.reserve(members.size());
    for (std::size_t i : members) {
      raws.emplace_back(records[i].item_id,
                        RawEngagement(records[i].engagement, config.lambda_counts));
    }
    const auto engagement = NormalizeAndSmooth(raws, config);
    for (std::size_t i : members) {
      const auto& r = records[i];
      out[i] = BuildTarget(r, Arbitrate(r, config),
                           AggregatePriors(r.channel_ranks, config),
                           engagement.at(r.item_id), config);
    }
  });
  return out;
}

PipelineConfig RelOnly(PipelineConfig config) {
  config.mu_rel = 1.0;
  config.lambda_eng = 0.0;
  return config;
}

ScoreSummary Summarize(std::span<const SupervisionTarget> targets) {
  ScoreSummary s;
  s.records = targets.size();
  for (const auto& t : targets) {
    ++(t.polarity == Polarity::kPositive ? s.positives : s.negatives);
    ++s.rating_histogram[static_cast<std::size_t>(t.rating)];
    ++s.decisions[static_cast<std::size_t>(t.decided_by)];
  }
  return s;
}

std::string ScoreSummaryToJson(const ScoreSummary& summary) {
  ordered_json j;
  j["records"] = summary.records;
  j["positives"] = summary.positives;
  j["negatives"] = summary.negatives;
  j["rating_histogram"] = summary.rating_histogram;
  auto decisions = ordered_json::object();
  for (auto d : {Decision::kHuman, Decision::kEarlyAccept, Decision::kMajority,
                 Decision::kFinalStageTiebreak}) {
    decisions[std::string(DecisionName(d))] =
        summary.decisions[static_cast<std::size_t>(d)];
  }
  j["decided_by"] = std::move(decisions);
  return j.dump();
}

std::string TargetToJson(const SupervisionTarget& t) {
  ordered_json j;
  j["query_id"] = t.query_id;
  j["item_id"] = t.item_id;
  j["query_text"] = t.query_text;
  j["item_text"] = t.item_text;
  j["rel_rating"] = t.rating;
  j["decided_by"] = DecisionName(t.decided_by);
  j["polarity"] = PolarityName(t.polarity);
  j["rel_score"] = t.rel_score;
  j["rel_rank"] = OptionalNumber(t.rel_rank);
  j["target"] = t.target;
  j["difficulty"] = OptionalNumber(t.difficulty);
  j["token_similarity"] = t.token_similarity;
  j["prior"] = t.prior;
  j["consensus"] = t.consensus;
  j["channels_hit"] = t.channels_hit;
  j["engagement"] = t.engagement;
  return j.dump();
}

SupervisionTarget TargetFromJson(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    ThrowValidation(std::string("malformed JSON: ") + e.what());
  }
  SupervisionTarget t;
  try {
    t.query_id = j.at("query_id").get<std::string>();
    t.item_id = j.at("item_id").get<std::string>();
    t.query_text = j.value("query_text", std::string());
    t.item_text = j.value("item_text", std::string());
    t.rating = j.at("rel_rating").get<int>();
    t.decided_by = DecisionFromName(j.at("decided_by").get<std::string>());
    const auto polarity = j.at("polarity").get<std::string>();
    if (polarity == "positive") {
      t.polarity = Polarity::kPositive;
    } else if (polarity == "negative") {
      t.polarity = Polarity::kNegative;
    } else {
      ThrowValidation("unknown polarity '" + polarity + "'");
    }
    t.rel_score = j.at("rel_score").get<double>();
    t.rel_rank = OptionalField(j, "rel_rank");
    t.target = j.at("target").get<double>();
    t.difficulty = OptionalField(j, "difficulty");
    t.token_similarity = j.at("token_similarity").get<double>();
    t.prior = j.at("prior").get<double>();
    t.consensus = j.at("consensus").get<double>();
    t.channels_hit = j.at("channels_hit").get<int>();
    t.engagement = j.at("engagement").get<double>();
  } catch (const ordered_json::exception& e) {
    ThrowValidation(std::string("bad target field: ") + e.what());
  }
  if (t.rating < kMinRating || t.rating > kMaxRating ||
      (t.polarity == Polarity::kPositive) != IsPositiveRating(t.rating)) {
    ThrowValidation("target polarity and rating disagree");
  }
  return t;
}

std::string FormatTargets(std::span<const SupervisionTarget> targets) {
  std::string out;
  for (const auto& t : targets) {
    out += TargetToJson(t);
    out += '\n';
  }
  return out;
}

std::vector<SupervisionTarget> ParseTargets(std::string_view text,
                                            std::string_view origin) {
  std::vector<SupervisionTarget> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(TargetFromJson(line));
    } catch (const Error& e) {
      ThrowValidation(std::string(origin) + ":" + std::to_string(line_no) +
                      ": " + e.what());
    }
  }
  return out;
}

std::vector<JudgedQuery> JudgeCorpus(std::span<const QipRecord> records,
                                     const PipelineConfig& config,
                                     int threads) {
  const auto groups = GroupByQuery(records);
  std::vector<JudgedQuery> out(groups.size());
  ParallelFor(groups.size(), threads, [&](std::size_t g) {
    auto& judged = out[g];
    std::vector<double> raws;
    for (std::size_t i : groups[g]) {
      const auto& r = records[i];
      judged.query_id = r.query_id;
      judged.item_ids.push_back(r.item_id);
      judged.ratings.push_back(Arbitrate(r, config).rating);
      raws.push_back(RawEngagement(r.engagement, config.lambda_counts));
    }
    judged.engagement_percentiles = MidRankPercentiles(raws);
  });
  return out;
}

std::vector<RankedList> RetrieveByEmbedding(std::span<const JudgedQuery> judged,
                                            const EmbeddingTable& items,
                                            const EmbeddingTable& queries,
                                            std::size_t k, int threads) {
  std::vector<RankedList> out(judged.size());
  ParallelFor(judged.size(), threads, [&](std::size_t q) {
    const auto& jq = judged[q];
    const auto row = queries.find(jq.query_id);
    if (!row) ThrowValidation("no query embedding for '" + jq.query_id + "'");
    std::unordered_map<std::string_view, std::size_t> candidate;
    for (std::size_t i = 0; i < jq.item_ids.size(); ++i) candidate.emplace(jq.item_ids[i], i);
    auto& list = out[q];
    list.query_id = jq.query_id;
    list.ideal_pool = jq.ratings;
    for (auto& hit : TopK(queries.vector(*row), items, k)) {
      RankedItem item{.item_id = hit.id, .similarity = hit.similarity};
      const auto it = candidate.find(hit.id);
      if (it != candidate.end()) {
        item.rating = jq.ratings[it->second];
        item.engagement_percentile = jq.engagement_percentiles[it->second];
      } else {
        list.ideal_pool.push_back(0);
      }
      list.items.push_back(std::move(item));
    }
  });
  return out;
}

std::vector<RankedList> RankByScores(std::span<const JudgedQuery> judged,
                                     std::span<const SupervisionTarget> scored,
                                     std::size_t k) {
  std::map<std::pair<std::string_view, std::string_view>, double> score;
  for (const auto& t : scored) score[{t.query_id, t.item_id}] = t.target;
  std::vector<RankedList> out;
  out.reserve(judged.size());
  for (const auto& jq : judged) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(jq.item_ids.size());
    for (std::size_t i = 0; i < jq.item_ids.size(); ++i) {
      const auto it = score.find({jq.query_id, jq.item_ids[i]});
      order.emplace_back(it != score.end() ? it->second
                                           : -std::numeric_limits<double>::infinity(),
                         i);
    }
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(take),
                      order.end(), [&](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return jq.item_ids[a.second] < jq.item_ids[b.second];
                      });
    RankedList list;
    list.query_id = jq.query_id;
    list.ideal_pool = jq.ratings;
    for (std::size_t p = 0; p < take; ++p) {
      const auto i = order[p].second;
      list.items.push_back(
          {.item_id = jq.item_ids[i],
           .similarity = std::isfinite(order[p].first) ? order[p].first : -1.0,
           .rating = jq.ratings[i],
           .engagement_percentile = jq.engagement_percentiles[i]});
    }
    out.push_back(std::move(list));
  }
  return out;
}

EvaluationOutput EvaluateRuns(std::span<const RankedList> lists,
                              const PipelineConfig& config, int threads) {
  EvaluationOutput output;
  output.per_query.resize(lists.size());
  ParallelFor(lists.size(), threads, [&](std::size_t q) {
    output.per_query[q] = ComputeQueryMetrics(lists[q], config);
  });
  output.summary = MacroAverage(output.per_query, config.density_cutoffs.size());
  return output;
}

std::string EvaluationReportToJson(const EvaluationOutput& output,
                                   const PipelineConfig& config,
                                   std::size_t k) {
  ordered_json j;
  j["queries"] = output.per_query.size();
  j["k"] = k;
  j["relevant_threshold"] = config.relevant_threshold;
  j["ndcg_gain"] = config.ndcg_gain == NdcgGain::kLinear ? "linear" : "exponential";
  j["avg_relevance"] = output.summary.avg_relevance;
  j["precision"] = output.summary.precision;
  j["ndcg"] = output.summary.ndcg;
  auto density = ordered_json::object();
  for (std::size_t c = 0; c < config.density_cutoffs.size(); ++c) {
    density[FormatDouble(config.density_cutoffs[c])] = output.summary.density[c];
  }
  j["engagement_density"] = std::move(density);
  return j.dump(2);
}

}  // namespace unisup
