#include "unisup/curriculum.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <json.hpp>

#include "unisup/error.h"
#include "unisup/kv_file.h"
#include "unisup/parallel.h"

namespace unisup {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Uniform in the open interval (0, 1).
double OpenUniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<std::string> DrawQuery(const QueryPlan& query, std::size_t count,
                                   std::uint64_t seed) {
  const auto& negatives = query.negatives;
  if (count == 0 || negatives.empty()) return {};
  // Weighted sampling without replacement via exponential keys:
  // key = ln(u) / p; the largest keys win, the top one with probability p.
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, std::size_t>> keys;
  keys.reserve(negatives.size());
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    const double u = OpenUniform(rng);
    const double p = negatives[i].probability;
    const double key = p > 0.0 ? std::log(u) / p
                               : -std::numeric_limits<double>::infinity();
    keys.emplace_back(key, i);
  }
  const std::size_t take = std::min(count, negatives.size());
  auto by_key = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::partial_sort(keys.begin(), keys.begin() + static_cast<long>(take),
                    keys.end(), by_key);
  std::vector<std::string> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back(negatives[keys[i].second].item_id);
  }
  return out;
}

}  // namespace

double TemperatureForEpoch(const PipelineConfig& config, std::size_t epoch) {
  const auto& schedule = config.temperature_schedule;
  if (schedule.empty()) ThrowValidation("empty temperature schedule");
  return schedule[std::min(epoch, schedule.size() - 1)];
}

std::vector<double> TemperedProbabilities(std::span<const double> weights,
                                          double temperature) {
  if (!(temperature > 0.0)) ThrowValidation("temperature must be > 0");
  std::vector<double> out(weights.size(), 0.0);
  double max_log = -std::numeric_limits<double>::infinity();
  for (double w : weights) {
    if (w > 0.0) max_log = std::max(max_log, std::log(w) / temperature);
  }
  if (!std::isfinite(max_log)) return out;
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      out[i] = std::exp(std::log(weights[i]) / temperature - max_log);
      total += out[i];
    }
  }
  for (double& p : out) p /= total;
  return out;
}

SamplingPlan BuildPlan(std::span<const SupervisionTarget> targets,
                       double temperature, int negatives_per_positive,
                       const PipelineConfig& config) {
  (void)config;
  if (!(temperature > 0.0)) ThrowValidation("temperature must be > 0");
  if (negatives_per_positive < 0) {
    ThrowValidation("negatives_per_positive must be >= 0");
  }
  SamplingPlan plan;
  plan.temperature = temperature;
  plan.negatives_per_positive = negatives_per_positive;
  for (const auto& t : targets) {
    auto& query = plan.per_query[t.query_id];
    if (t.polarity == Polarity::kPositive) {
      ++query.positives;
    } else {
      query.negatives.push_back(
          {.item_id = t.item_id,
           .weight = t.difficulty.value_or(0.0) + kDifficultyFloor});
    }
  }
  std::vector<double> weights;
  for (auto& [query_id, query] : plan.per_query) {
    weights.clear();
    for (const auto& n : query.negatives) weights.push_back(n.weight);
    const auto probs = TemperedProbabilities(weights, temperature);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      query.negatives[i].probability = probs[i];
    }
    if (query.positives > 0 && query.negatives.empty() &&
        negatives_per_positive > 0) {
      plan.issues.push_back("query '" + query_id +
                            "' has positives but no negatives");
    }
  }
  return plan;
}

std::uint64_t QuerySeed(std::uint64_t seed, std::string_view query_id) {
  return SplitMix64(seed ^ SplitMix64(Fnv1a(query_id)));
}

std::vector<SampledPair> Sample(const SamplingPlan& plan, std::uint64_t seed,
                                int threads) {
  std::vector<const std::pair<const std::string, QueryPlan>*> queries;
  for (const auto& entry : plan.per_query) queries.push_back(&entry);
  std::vector<std::vector<std::string>> drawn(queries.size());
  ParallelFor(queries.size(), threads, [&](std::size_t i) {
    const auto& [query_id, query] = *queries[i];
    const auto count = query.positives *
                       static_cast<std::size_t>(plan.negatives_per_positive);
    drawn[i] = DrawQuery(query, count, QuerySeed(seed, query_id));
  });
  std::vector<SampledPair> out;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (auto& item : drawn[i]) out.emplace_back(queries[i]->first, std::move(item));
  }
  return out;
}

std::string FormatDataset(std::span<const SupervisionTarget> targets,
                          std::span<const SampledPair> sampled,
                          DatasetSummary* summary) {
  const std::set<SampledPair> chosen(sampled.begin(), sampled.end());
  DatasetSummary counts;
  std::string out;
  for (const auto& t : targets) {
    const bool positive = t.polarity == Polarity::kPositive;
    if (!positive && !chosen.contains({t.query_id, t.item_id})) continue;
    nlohmann::ordered_json j;
    j["query_text"] = t.query_text;
    j["item_text"] = t.item_text;
    j["polarity"] = PolarityName(t.polarity);
    j["target"] = t.target;
    j["difficulty"] = t.difficulty ? nlohmann::ordered_json(*t.difficulty)
                                   : nlohmann::ordered_json(nullptr);
    j["rel_rating"] = t.rating;
    j["channels_hit"] = t.channels_hit;
    out += j.dump();
    out += '\n';
    ++(positive ? counts.positives : counts.negatives);
    ++counts.rating_histogram[static_cast<std::size_t>(t.rating)];
  }
  if (summary) *summary = counts;
  return out;
}

DatasetSummary EmitDataset(std::span<const SupervisionTarget> targets,
                           std::span<const SampledPair> sampled,
                           const std::string& path) {
  DatasetSummary summary;
  WriteTextFile(path, FormatDataset(targets, sampled, &summary));
  return summary;
}

std::string SummaryToJson(const DatasetSummary& summary) {
  nlohmann::ordered_json j;
  j["total"] = summary.total();
  j["positives"] = summary.positives;
  j["negatives"] = summary.negatives;
  j["rating_histogram"] = summary.rating_histogram;
  return j.dump();
}

}  // namespace unisup
