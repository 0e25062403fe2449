#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unisup/datamodel.h"

namespace unisup {

// Exact-search item index. Vectors are stored row-major as float32 and must
// be unit length within 1e-6.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return ids_.size(); }
  const std::string& id(std::size_t row) const { return ids_[row]; }
  std::span<const float> vector(std::size_t row) const {
    return {values_.data() + row * dimension_, dimension_};
  }
  std::optional<std::size_t> find(std::string_view id) const;

  // Throws on dimension mismatch, non-unit norm or a duplicate id.
  void Add(std::string id, std::span<const float> values);

 private:
  std::size_t dimension_;
  std::vector<std::string> ids_;
  std::vector<float> values_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Scales to unit L2 norm. Throws on a zero vector.
std::vector<float> Normalized(std::span<const float> values);

// Dot product accumulated in double, in index order.
double Dot(std::span<const float> a, std::span<const float> b);

struct Neighbor {
  std::string id;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// The k rows with the largest dot product, descending; ties go to the
// smaller id. Throws on dimension mismatch or k < 1.
std::vector<Neighbor> TopK(std::span<const float> query,
                           const EmbeddingTable& table, std::size_t k);

struct RankedItem {
  std::string item_id;
  double similarity = 0.0;
  int rating = 0;
  double engagement_percentile = 0.0;
};

struct RankedList {
  std::string query_id;
  std::vector<RankedItem> items;
  // Ratings of every judged candidate for the query, retrieved or not.
  std::vector<int> ideal_pool;
};

double AvgRelevanceAtK(const RankedList& list);
double PrecisionAtK(const RankedList& list, int threshold);

double Gain(int rating, NdcgGain gain);

// DCG over the list against the ideal DCG of `ideal_pool` truncated to the
// list length. An all-zero pool scores 1. Throws if the list is longer than
// the pool.
double NdcgAtK(const RankedList& list, std::span<const int> ideal_pool,
               NdcgGain gain);

struct DensityPoint {
  double cutoff = 0.0;
  double share = 0.0;
};

// Share of listed items whose engagement percentile is >= each cutoff.
std::vector<DensityPoint> EngagementDensityCurve(
    const RankedList& list, std::span<const double> cutoffs);

// Mid-rank percentiles in [0, 100]:
// 100 * (#strictly lower + 0.5 * #equal) / n.
std::vector<double> MidRankPercentiles(std::span<const double> values);

struct QueryMetrics {
  std::string query_id;
  double avg_relevance = 0.0;
  double precision = 0.0;
  double ndcg = 0.0;
  std::vector<double> density;  // aligned with the cutoffs in use

  bool operator==(const QueryMetrics&) const = default;
};

QueryMetrics ComputeQueryMetrics(const RankedList& list,
                                 const PipelineConfig& config);

struct MetricSummary {
  double avg_relevance = 0.0;
  double precision = 0.0;
  double ndcg = 0.0;
  std::vector<double> density;
};

// Macro average: every query weighs the same. Empty input gives zeros.
MetricSummary MacroAverage(std::span<const QueryMetrics> rows,
                           std::size_t cutoff_count);

struct MetricComparison {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;
  std::optional<double> lift;  // (b - a) / a, absent when a == 0
};

struct CompareReport {
  std::size_t queries = 0;
  std::vector<MetricComparison> metrics;
};

// Throws when the two runs cover different query sets.
CompareReport CompareMetricTables(std::span<const QueryMetrics> run_a,
                                  std::span<const QueryMetrics> run_b,
                                  std::span<const double> cutoffs);

CompareReport CompareRuns(std::span<const RankedList> run_a,
                          std::span<const RankedList> run_b,
                          const PipelineConfig& config);

std::string CompareReportToJson(const CompareReport& report);

// Tab-separated: query_id, avg_rel, p_at_k, ndcg, share_ge_<cutoff>...
std::string FormatMetricTable(std::span<const QueryMetrics> rows,
                              std::span<const double> cutoffs);
std::vector<QueryMetrics> ParseMetricTable(std::string_view text,
                                           std::vector<double>* cutoffs,
                                           std::string_view origin);

// Two columns: cutoff, share.
std::string FormatDensityCurve(std::span<const double> cutoffs,
                               std::span<const double> shares);

}  // namespace unisup
