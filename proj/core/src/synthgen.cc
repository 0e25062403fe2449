#include "unisup/synthgen.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "unisup/error.h"
#include "unisup/kv_file.h"

namespace unisup {
namespace {

constexpr std::array<const char*, 40> kVocabulary = {
    "organic", "baby",    "lotion",  "paper",    "towel",  "gluten",  "free",
    "pizza",   "frozen",  "crust",   "shampoo",  "dry",    "dog",     "food",
    "cat",     "litter",  "coffee",  "pods",     "dark",   "roast",   "milk",
    "almond",  "oat",     "laundry", "detergent", "gel",   "kids",    "shoes",
    "running", "red",     "blue",    "black",    "wireless", "earbuds", "phone",
    "charger", "usb",     "cable",   "large",    "pack"};

constexpr std::array<double, kNumRatings> kPlantedCosine = {0.15, 0.30, 0.45,
                                                            0.60, 0.75};

// Deterministic sampling helpers on top of a 64-bit Mersenne Twister. The
// transforms are written out so output does not depend on the standard
// library's distribution implementations.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double Uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = Uniform();
    const double u2 = Uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::size_t Index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(Uniform() * static_cast<double>(n)));
  }

  int Categorical(const std::array<double, kNumRatings>& probs) {
    double u = Uniform();
    for (int i = 0; i < kNumRatings - 1; ++i) {
      if (u < probs[i]) return i;
      u -= probs[i];
    }
    return kNumRatings - 1;
  }

  std::int64_t Poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
      const double limit = std::exp(-mean);
      std::int64_t k = 0;
      double product = Uniform();
      while (product > limit) {
        ++k;
        product *= Uniform();
      }
      return k;
    }
    const double draw = std::round(mean + std::sqrt(mean) * Normal());
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(draw));
  }

  std::int64_t Binomial(std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (n <= 64) {
      std::int64_t hits = 0;
      for (std::int64_t i = 0; i < n; ++i) hits += Uniform() < p;
      return hits;
    }
    const double mean = static_cast<double>(n) * p;
    const double sd = std::sqrt(mean * (1.0 - p));
    const double draw = std::round(mean + sd * Normal());
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(draw), 0, n);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t Mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<double> RandomUnit(SynthRng& rng, int dimension) {
  std::vector<double> v(static_cast<std::size_t>(dimension));
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (auto& x : v) {
      x = rng.Normal();
      norm += x * x;
    }
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

std::vector<float> ToUnitFloat(const std::vector<double>& v) {
  std::vector<float> f(v.begin(), v.end());
  return Normalized(f);
}

// Unit vector whose cosine with unit `axis` is `cosine`.
std::vector<double> OnCone(SynthRng& rng, const std::vector<double>& axis,
                           double cosine) {
  std::vector<double> u;
  double norm = 0.0;
  while (norm < 1e-6) {
    u = RandomUnit(rng, static_cast<int>(axis.size()));
    double along = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) along += u[i] * axis[i];
    norm = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] -= along * axis[i];
      norm += u[i] * u[i];
    }
    norm = std::sqrt(norm);
  }
  const double sine = std::sqrt(std::max(0.0, 1.0 - cosine * cosine));
  std::vector<double> out(axis.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = cosine * axis[i] + sine * u[i] / norm;
  }
  return out;
}

StageDistribution StageOutput(SynthRng& rng, int rating, const SynthSpec& spec) {
  int peak = rating;
  if (rng.Uniform() < spec.stage_label_noise) {
    if (rating == kMinRating) {
      peak = rating + 1;
    } else if (rating == kMaxRating) {
      peak = rating - 1;
    } else {
      peak = rating + (rng.Uniform() < 0.5 ? -1 : 1);
    }
  }
  const double mass =
      std::clamp(spec.stage_confidence + 0.1 * rng.Normal(), 0.3, 0.99);
  StageDistribution dist{};
  double other_total = 0.0;
  for (int label = 0; label < kNumRatings; ++label) {
    if (label == peak) continue;
    dist[label] = 0.5 + 0.5 * rng.Uniform();
    other_total += dist[label];
  }
  for (int label = 0; label < kNumRatings; ++label) {
    if (label != peak) dist[label] *= (1.0 - mass) / other_total;
  }
  dist[peak] = mass;
  return dist;
}

std::string Pad(int value, int width) {
  std::string s = std::to_string(value);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

}  // namespace

void ValidateSynthSpec(const SynthSpec& spec) {
  std::vector<std::string> problems;
  if (spec.n_queries < 1) problems.push_back("n_queries must be positive");
  if (spec.items_per_query < 1) problems.push_back("items_per_query must be positive");
  if (spec.dimension < 2) problems.push_back("dimension must be >= 2");
  double mixture_total = 0.0;
  for (double p : spec.rating_mixture) {
    if (!(p >= 0.0)) problems.push_back("rating_mixture entries must be >= 0");
    mixture_total += p;
  }
  if (!(std::abs(mixture_total - 1.0) <= 1e-9)) {
    problems.push_back("rating_mixture must sum to 1");
  }
  if (!(spec.engagement_relevance_correlation >= -1.0 &&
        spec.engagement_relevance_correlation <= 1.0)) {
    problems.push_back("engagement_relevance_correlation outside [-1,1]");
  }
  if (!(spec.channel_noise >= 0.0)) problems.push_back("channel_noise must be >= 0");
  if (spec.channels.empty()) problems.push_back("at least one channel required");
  if (!(spec.channel_depth > 0.0 && spec.channel_depth <= 1.0)) {
    problems.push_back("channel_depth outside (0,1]");
  }
  if (spec.stages < 1) problems.push_back("stages must be positive");
  if (!(spec.human_label_fraction >= 0.0 && spec.human_label_fraction <= 1.0)) {
    problems.push_back("human_label_fraction outside [0,1]");
  }
  if (!(spec.stage_confidence >= 0.3 && spec.stage_confidence <= 0.99)) {
    problems.push_back("stage_confidence outside [0.3,0.99]");
  }
  if (!(spec.stage_label_noise >= 0.0 && spec.stage_label_noise <= 1.0)) {
    problems.push_back("stage_label_noise outside [0,1]");
  }
  if (!(spec.embedding_noise >= 0.0)) problems.push_back("embedding_noise must be >= 0");
  if (!(spec.views_log_sigma >= 0.0)) problems.push_back("views_log_sigma must be >= 0");
  if (!problems.empty()) {
    std::string message = "invalid synth spec:";
    for (const auto& p : problems) message += "\n  " + p;
    ThrowValidation(message);
  }
}

SynthSpec ParseSynthSpec(std::string_view text, std::string_view origin) {
  SynthSpec spec;
  auto as_int = [](std::string_view key, std::string_view value) {
    const auto v = ParseInt(key, value);
    if (v < 0 || v > 100'000'000) ThrowValidation(std::string(key) + " out of range");
    return static_cast<int>(v);
  };
  for (const auto& [key, value] : ParseKeyValues(text, origin)) {
    if (key == "n_queries") {
      spec.n_queries = as_int(key, value);
    } else if (key == "items_per_query") {
      spec.items_per_query = as_int(key, value);
    } else if (key == "dimension") {
      spec.dimension = as_int(key, value);
    } else if (key == "rating_mixture") {
      const auto values = ParseDoubleList(key, value);
      if (values.size() != kNumRatings) {
        ThrowValidation(std::string(origin) + ": rating_mixture needs 5 values");
      }
      std::copy(values.begin(), values.end(), spec.rating_mixture.begin());
    } else if (key == "engagement_relevance_correlation") {
      spec.engagement_relevance_correlation = ParseDouble(key, value);
    } else if (key == "channel_noise") {
      spec.channel_noise = ParseDouble(key, value);
    } else if (key == "seed") {
      spec.seed = ParseUint(key, value);
    } else if (key == "channels") {
      spec.channels = SplitList(value);
    } else if (key == "channel_depth") {
      spec.channel_depth = ParseDouble(key, value);
    } else if (key == "stages") {
      spec.stages = as_int(key, value);
    } else if (key == "human_label_fraction") {
      spec.human_label_fraction = ParseDouble(key, value);
    } else if (key == "stage_confidence") {
      spec.stage_confidence = ParseDouble(key, value);
    } else if (key == "stage_label_noise") {
      spec.stage_label_noise = ParseDouble(key, value);
    } else if (key == "embedding_noise") {
      spec.embedding_noise = ParseDouble(key, value);
    } else if (key == "views_log_mean") {
      spec.views_log_mean = ParseDouble(key, value);
    } else if (key == "views_log_sigma") {
      spec.views_log_sigma = ParseDouble(key, value);
    } else {
      ThrowValidation(std::string(origin) + ": unknown key '" + key + "'");
    }
  }
  ValidateSynthSpec(spec);
  return spec;
}

SynthSpec LoadSynthSpec(const std::string& path) {
  return ParseSynthSpec(ReadTextFile(path), path);
}

std::string FormatSynthSpec(const SynthSpec& spec) {
  std::ostringstream out;
  out << "n_queries = " << spec.n_queries << '\n'
      << "items_per_query = " << spec.items_per_query << '\n'
      << "dimension = " << spec.dimension << '\n'
      << "rating_mixture = ";
  for (int i = 0; i < kNumRatings; ++i) {
    out << (i ? "," : "") << FormatDouble(spec.rating_mixture[i]);
  }
  out << '\n'
      << "engagement_relevance_correlation = "
      << FormatDouble(spec.engagement_relevance_correlation) << '\n'
      << "channel_noise = " << FormatDouble(spec.channel_noise) << '\n'
      << "seed = " << spec.seed << '\n'
      << "channels = ";
  for (std::size_t i = 0; i < spec.channels.size(); ++i) {
    out << (i ? "," : "") << spec.channels[i];
  }
  out << '\n'
      << "channel_depth = " << FormatDouble(spec.channel_depth) << '\n'
      << "stages = " << spec.stages << '\n'
      << "human_label_fraction = " << FormatDouble(spec.human_label_fraction) << '\n'
      << "stage_confidence = " << FormatDouble(spec.stage_confidence) << '\n'
      << "stage_label_noise = " << FormatDouble(spec.stage_label_noise) << '\n'
      << "embedding_noise = " << FormatDouble(spec.embedding_noise) << '\n'
      << "views_log_mean = " << FormatDouble(spec.views_log_mean) << '\n'
      << "views_log_sigma = " << FormatDouble(spec.views_log_sigma) << '\n';
  return out.str();
}

PipelineConfig ConfigForSpec(const SynthSpec& spec) {
  PipelineConfig config = LoadDefaultConfig();
  config.channel_caps.clear();
  for (const auto& channel : spec.channels) config.channel_caps[channel] = 1000;
  if (static_cast<std::size_t>(spec.stages) != config.stage_thresholds.size()) {
    config.stage_thresholds.assign(static_cast<std::size_t>(spec.stages), 0.85);
  }
  return config;
}

SynthCorpus Generate(const SynthSpec& spec) {
  ValidateSynthSpec(spec);
  const auto dim = static_cast<std::size_t>(spec.dimension);
  SynthCorpus corpus{.items = EmbeddingTable(dim), .queries = EmbeddingTable(dim)};
  const auto n_items = static_cast<std::size_t>(spec.items_per_query);
  corpus.records.reserve(static_cast<std::size_t>(spec.n_queries) * n_items);

  // Standardization of positive ratings for the engagement correlation.
  const double p3 = spec.rating_mixture[3];
  const double p4 = spec.rating_mixture[4];
  double pos_mean = 3.5, pos_sd = 0.0;
  if (p3 + p4 > 0.0) {
    pos_mean = (3.0 * p3 + 4.0 * p4) / (p3 + p4);
    pos_sd = std::sqrt(p3 * p4) / (p3 + p4);
  }
  const double rho = spec.engagement_relevance_correlation;
  const int query_width = std::max(5, static_cast<int>(std::to_string(spec.n_queries).size()));
  const int item_width = std::max(3, static_cast<int>(std::to_string(spec.items_per_query).size()));
  const auto depth = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(spec.channel_depth * static_cast<double>(n_items))));

  for (int q = 0; q < spec.n_queries; ++q) {
    SynthRng rng(Mix(spec.seed, static_cast<std::uint64_t>(q)));
    const std::string query_id = "q" + Pad(q, query_width);
    std::vector<std::string> query_words;
    for (int w = 0; w < 3; ++w) query_words.push_back(kVocabulary[rng.Index(kVocabulary.size())]);
    std::string query_text = query_words[0] + " " + query_words[1] + " " + query_words[2];
    const auto axis = RandomUnit(rng, spec.dimension);
    corpus.queries.Add(query_id, ToUnitFloat(axis));

    const std::size_t first = corpus.records.size();
    std::vector<int> ratings(n_items);
    for (std::size_t i = 0; i < n_items; ++i) {
      const int rating = rng.Categorical(spec.rating_mixture);
      ratings[i] = rating;
      QipRecord r;
      r.query_id = query_id;
      r.query_text = query_text;
      r.item_id = query_id + "-i" + Pad(static_cast<int>(i), item_width);

      std::string item_text;
      for (const auto& word : query_words) {
        if (rng.Uniform() < 0.15 + 0.2 * rating) item_text += word + " ";
      }
      const int filler = 2 + static_cast<int>(rng.Index(3));
      for (int f = 0; f < filler; ++f) item_text += std::string(kVocabulary[rng.Index(kVocabulary.size())]) + " ";
      item_text += "item " + std::to_string(i);
      r.item_text = std::move(item_text);

      const double cosine = std::clamp(
          kPlantedCosine[rating] + spec.embedding_noise * rng.Normal(), -0.99, 0.99);
      corpus.items.Add(r.item_id, ToUnitFloat(OnCone(rng, axis, cosine)));

      if (rng.Uniform() < spec.human_label_fraction) r.human_rating = rating;
      for (int s = 0; s < spec.stages; ++s) {
        r.stage_distributions.push_back(StageOutput(rng, rating, spec));
      }

      double popularity;
      if (rating >= 3) {
        const double standardized = pos_sd > 0.0 ? (rating - pos_mean) / pos_sd : 0.0;
        popularity = rho * standardized + std::sqrt(1.0 - rho * rho) * rng.Normal();
      } else {
        popularity = rng.Normal() - 1.0;
      }
      const double view_rate = std::exp(spec.views_log_mean + spec.views_log_sigma * popularity);
      auto& e = r.engagement;
      e.views = rng.Poisson(std::min(view_rate, 1e7));
      e.clicks = rng.Binomial(e.views, 0.08);
      e.carts = rng.Binomial(e.clicks, 0.25);
      e.orders = rng.Binomial(e.carts, 0.5);

      corpus.records.push_back(std::move(r));
      corpus.planted_ratings.push_back(rating);
    }

    for (const auto& channel : spec.channels) {
      std::vector<std::pair<double, std::size_t>> scored(n_items);
      for (std::size_t i = 0; i < n_items; ++i) {
        scored[i] = {ratings[i] + spec.channel_noise * rng.Normal(), i};
      }
      std::stable_sort(scored.begin(), scored.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t pos = 0; pos < std::min(depth, n_items); ++pos) {
        corpus.records[first + scored[pos].second].channel_ranks[channel] =
            static_cast<std::int64_t>(pos + 1);
      }
    }
  }
  return corpus;
}

}  // namespace unisup
