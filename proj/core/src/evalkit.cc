#include "unisup/evalkit.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "unisup/error.h"
#include "unisup/kv_file.h"

namespace unisup {
namespace {

constexpr double kUnitTolerance = 1e-6;

void RequireNonEmpty(const RankedList& list, const char* metric) {
  if (list.items.empty()) {
    ThrowValidation(std::string(metric) + " of empty list for query '" +
                    list.query_id + "'");
  }
}

double Dcg(std::span<const int> ratings, std::size_t depth, NdcgGain gain) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(depth, ratings.size()); ++i) {
    dcg += Gain(ratings[i], gain) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

std::string CutoffColumn(double cutoff) { return "share_ge_" + FormatDouble(cutoff); }

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) ThrowValidation("embedding dimension must be positive");
}

std::optional<std::size_t> EmbeddingTable::find(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingTable::Add(std::string id, std::span<const float> values) {
  if (values.size() != dimension_) {
    ThrowValidation("vector for '" + id + "' has dimension " +
                    std::to_string(values.size()) + ", table has " +
                    std::to_string(dimension_));
  }
  const double norm = std::sqrt(Dot(values, values));
  if (!(std::abs(norm - 1.0) <= kUnitTolerance)) {
    ThrowValidation("vector for '" + id + "' is not unit length");
  }
  if (!index_.emplace(id, ids_.size()).second) {
    ThrowValidation("duplicate embedding id '" + id + "'");
  }
  ids_.push_back(std::move(id));
  values_.insert(values_.end(), values.begin(), values.end());
}

std::vector<float> Normalized(std::span<const float> values) {
  const double norm = std::sqrt(Dot(values, values));
  if (!(norm > 0.0)) ThrowValidation("cannot normalize a zero vector");
  std::vector<float> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<float>(values[i] / norm);
  }
  return out;
}

double Dot(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

std::vector<Neighbor> TopK(std::span<const float> query,
                           const EmbeddingTable& table, std::size_t k) {
  if (query.size() != table.dimension()) {
    ThrowValidation("query dimension " + std::to_string(query.size()) +
                    " does not match table dimension " +
                    std::to_string(table.dimension()));
  }
  if (k < 1) ThrowValidation("k must be >= 1");
  std::vector<std::pair<double, std::size_t>> scored(table.size());
  for (std::size_t row = 0; row < table.size(); ++row) {
    scored[row] = {Dot(query, table.vector(row)), row};
  }
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(take),
                    scored.end(), [&](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return table.id(a.second) < table.id(b.second);
                    });
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back({table.id(scored[i].second), scored[i].first});
  }
  return out;
}

double AvgRelevanceAtK(const RankedList& list) {
  RequireNonEmpty(list, "average relevance");
  double sum = 0.0;
  for (const auto& item : list.items) sum += item.rating;
  return sum / static_cast<double>(list.items.size());
}

double PrecisionAtK(const RankedList& list, int threshold) {
  RequireNonEmpty(list, "precision");
  std::size_t hits = 0;
  for (const auto& item : list.items) hits += item.rating >= threshold;
  return static_cast<double>(hits) / static_cast<double>(list.items.size());
}

double Gain(int rating, NdcgGain gain) {
  return gain == NdcgGain::kLinear ? static_cast<double>(rating)
                                   : std::exp2(rating) - 1.0;
}

double NdcgAtK(const RankedList& list, std::span<const int> ideal_pool,
               NdcgGain gain) {
  if (list.items.size() > ideal_pool.size()) {
    ThrowValidation("ranked list for query '" + list.query_id +
                    "' is longer than its ideal pool");
  }
  std::vector<int> retrieved;
  retrieved.reserve(list.items.size());
  for (const auto& item : list.items) retrieved.push_back(item.rating);
  std::vector<int> ideal(ideal_pool.begin(), ideal_pool.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = Dcg(ideal, retrieved.size(), gain);
  if (idcg == 0.0) return 1.0;
  return Dcg(retrieved, retrieved.size(), gain) / idcg;
}

std::vector<DensityPoint> EngagementDensityCurve(
    const RankedList& list, std::span<const double> cutoffs) {
  RequireNonEmpty(list, "engagement density");
  std::vector<DensityPoint> out;
  out.reserve(cutoffs.size());
  for (double cutoff : cutoffs) {
    std::size_t above = 0;
    for (const auto& item : list.items) above += item.engagement_percentile >= cutoff;
    out.push_back({cutoff, static_cast<double>(above) /
                               static_cast<double>(list.items.size())});
  }
  return out;
}

std::vector<double> MidRankPercentiles(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(values.size());
  const double n = static_cast<double>(values.size());
  for (double v : values) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
    const auto hi = std::upper_bound(lo, sorted.end(), v);
    const double below = static_cast<double>(lo - sorted.begin());
    const double equal = static_cast<double>(hi - lo);
    out.push_back(100.0 * (below + 0.5 * equal) / n);
  }
  return out;
}

QueryMetrics ComputeQueryMetrics(const RankedList& list,
                                 const PipelineConfig& config) {
  QueryMetrics m;
  m.query_id = list.query_id;
  m.avg_relevance = AvgRelevanceAtK(list);
  m.precision = PrecisionAtK(list, config.relevant_threshold);
  m.ndcg = NdcgAtK(list, list.ideal_pool, config.ndcg_gain);
  for (const auto& point : EngagementDensityCurve(list, config.density_cutoffs)) {
    m.density.push_back(point.share);
  }
  return m;
}

MetricSummary MacroAverage(std::span<const QueryMetrics> rows,
                           std::size_t cutoff_count) {
  MetricSummary s;
  s.density.assign(cutoff_count, 0.0);
  if (rows.empty()) return s;
  for (const auto& r : rows) {
    s.avg_relevance += r.avg_relevance;
    s.precision += r.precision;
    s.ndcg += r.ndcg;
    for (std::size_t c = 0; c < cutoff_count; ++c) s.density[c] += r.density.at(c);
  }
  const double n = static_cast<double>(rows.size());
  s.avg_relevance /= n;
  s.precision /= n;
  s.ndcg /= n;
  for (double& d : s.density) d /= n;
  return s;
}

CompareReport CompareMetricTables(std::span<const QueryMetrics> run_a,
                                  std::span<const QueryMetrics> run_b,
                                  std::span<const double> cutoffs) {
  std::map<std::string, const QueryMetrics*> by_query;
  for (const auto& row : run_a) {
    if (!by_query.emplace(row.query_id, &row).second) {
      ThrowValidation("run A repeats query '" + row.query_id + "'");
    }
  }
  std::vector<QueryMetrics> ordered_a;
  ordered_a.reserve(run_b.size());
  for (const auto& row : run_b) {
    const auto it = by_query.find(row.query_id);
    if (it == by_query.end() || it->second == nullptr) {
      ThrowValidation("query '" + row.query_id +
                      "' missing from run A or repeated in run B");
    }
    ordered_a.push_back(*it->second);
    it->second = nullptr;
  }
  if (ordered_a.size() != run_a.size()) {
    ThrowValidation("run B is missing queries present in run A");
  }
  const auto a = MacroAverage(ordered_a, cutoffs.size());
  const auto b = MacroAverage(run_b, cutoffs.size());

  CompareReport report;
  report.queries = run_b.size();
  auto add = [&](std::string name, double va, double vb) {
    MetricComparison m{std::move(name), va, vb, vb - va, std::nullopt};
    if (va != 0.0) m.lift = (vb - va) / va;
    report.metrics.push_back(std::move(m));
  };
  add("avg_relevance", a.avg_relevance, b.avg_relevance);
  add("precision", a.precision, b.precision);
  add("ndcg", a.ndcg, b.ndcg);
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    add(CutoffColumn(cutoffs[c]), a.density[c], b.density[c]);
  }
  return report;
}

CompareReport CompareRuns(std::span<const RankedList> run_a,
                          std::span<const RankedList> run_b,
                          const PipelineConfig& config) {
  std::vector<QueryMetrics> a, b;
  for (const auto& list : run_a) a.push_back(ComputeQueryMetrics(list, config));
  for (const auto& list : run_b) b.push_back(ComputeQueryMetrics(list, config));
  return CompareMetricTables(a, b, config.density_cutoffs);
}

std::string CompareReportToJson(const CompareReport& report) {
  nlohmann::ordered_json j;
  j["queries"] = report.queries;
  auto metrics = nlohmann::ordered_json::object();
  for (const auto& m : report.metrics) {
    metrics[m.name] = {{"run_a", m.a},
                       {"run_b", m.b},
                       {"delta", m.delta},
                       {"relative_lift", m.lift ? nlohmann::ordered_json(*m.lift)
                                                : nlohmann::ordered_json(nullptr)}};
  }
  j["metrics"] = std::move(metrics);
  return j.dump(2);
}

std::string FormatMetricTable(std::span<const QueryMetrics> rows,
                              std::span<const double> cutoffs) {
  std::string out = "query_id\tavg_rel\tp_at_k\tndcg";
  for (double c : cutoffs) out += "\t" + CutoffColumn(c);
  out += '\n';
  for (const auto& r : rows) {
    out += r.query_id;
    out += '\t' + FormatDouble(r.avg_relevance);
    out += '\t' + FormatDouble(r.precision);
    out += '\t' + FormatDouble(r.ndcg);
    for (double d : r.density) out += '\t' + FormatDouble(d);
    out += '\n';
  }
  return out;
}

std::vector<QueryMetrics> ParseMetricTable(std::string_view text,
                                           std::vector<double>* cutoffs,
                                           std::string_view origin) {
  auto split = [](std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
      const auto tab = line.find('\t');
      fields.push_back(line.substr(0, tab));
      if (tab == std::string_view::npos) break;
      line = line.substr(tab + 1);
    }
    return fields;
  };
  auto next_line = [&](std::string_view& rest) {
    const auto nl = rest.find('\n');
    auto line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  std::string_view rest = text;
  const auto header = split(next_line(rest));
  if (header.size() < 4 || header[0] != "query_id" || header[1] != "avg_rel" ||
      header[2] != "p_at_k" || header[3] != "ndcg") {
    ThrowValidation(std::string(origin) + ": not a per-query metric table");
  }
  std::vector<double> found_cutoffs;
  for (std::size_t c = 4; c < header.size(); ++c) {
    constexpr std::string_view prefix = "share_ge_";
    if (!header[c].starts_with(prefix)) {
      ThrowValidation(std::string(origin) + ": unexpected column '" +
                      std::string(header[c]) + "'");
    }
    found_cutoffs.push_back(ParseDouble(header[c], header[c].substr(prefix.size())));
  }
  std::vector<QueryMetrics> rows;
  std::size_t line_no = 1;
  while (!rest.empty()) {
    ++line_no;
    const auto line = next_line(rest);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      ThrowValidation(std::string(origin) + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(header.size()) + " columns");
    }
    QueryMetrics m;
    m.query_id = std::string(fields[0]);
    m.avg_relevance = ParseDouble("avg_rel", fields[1]);
    m.precision = ParseDouble("p_at_k", fields[2]);
    m.ndcg = ParseDouble("ndcg", fields[3]);
    for (std::size_t c = 4; c < fields.size(); ++c) {
      m.density.push_back(ParseDouble(header[c], fields[c]));
    }
    rows.push_back(std::move(m));
  }
  if (cutoffs) *cutoffs = std::move(found_cutoffs);
  return rows;
}

std::string FormatDensityCurve(std::span<const double> cutoffs,
                               std::span<const double> shares) {
  std::string out = "cutoff\tshare\n";
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    out += FormatDouble(cutoffs[i]) + '\t' + FormatDouble(shares[i]) + '\n';
  }
  return out;
}

}  // namespace unisup
