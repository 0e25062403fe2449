#include "unisup/config_io.h"

#include <sstream>

#include "unisup/error.h"
#include "unisup/kv_file.h"

namespace unisup {
namespace {

std::string JoinDoubles(const auto& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += FormatDouble(v);
  }
  return out;
}

int ParseSmallInt(std::string_view key, std::string_view value) {
  const auto parsed = ParseInt(key, value);
  if (parsed < -1'000'000'000 || parsed > 1'000'000'000) {
    ThrowValidation("'" + std::string(key) + "': out of range");
  }
  return static_cast<int>(parsed);
}

}  // namespace

PipelineConfig ParseConfig(std::string_view text, std::string_view origin) {
  PipelineConfig config = LoadDefaultConfig();
  for (const auto& [key, value] : ParseKeyValues(text, origin)) {
    if (key == "alpha") {
      config.alpha = ParseDouble(key, value);
    } else if (key == "beta") {
      config.beta = ParseDouble(key, value);
    } else if (key == "gamma") {
      config.gamma = ParseDouble(key, value);
    } else if (key == "mu_rel") {
      config.mu_rel = ParseDouble(key, value);
    } else if (key == "lambda_eng") {
      config.lambda_eng = ParseDouble(key, value);
    } else if (key == "kappa1") {
      config.kappa1 = ParseDouble(key, value);
    } else if (key == "kappa2") {
      config.kappa2 = ParseDouble(key, value);
    } else if (key == "lambda_counts") {
      const auto values = ParseDoubleList(key, value);
      if (values.size() != 4) {
        ThrowValidation(std::string(origin) +
                        ": lambda_counts needs exactly 4 values");
      }
      for (std::size_t i = 0; i < 4; ++i) config.lambda_counts[i] = values[i];
    } else if (key == "sigmoid_k") {
      config.sigmoid_k = ParseDouble(key, value);
    } else if (key == "epsilon_norm") {
      config.epsilon_norm = ParseDouble(key, value);
    } else if (key == "channel_caps") {
      config.channel_caps.clear();
      for (const auto& entry : SplitList(value)) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos || colon == 0) {
          ThrowValidation(std::string(origin) +
                          ": channel_caps entries must be 'channel:cap', got '" +
                          entry + "'");
        }
        const auto channel = entry.substr(0, colon);
        if (!config.channel_caps
                 .emplace(channel, ParseInt(key, entry.substr(colon + 1)))
                 .second) {
          ThrowValidation(std::string(origin) + ": duplicate channel '" +
                          channel + "'");
        }
      }
    } else if (key == "stage_thresholds") {
      config.stage_thresholds = ParseDoubleList(key, value);
    } else if (key == "argmax_tie_break") {
      if (value == "higher") {
        config.argmax_tie_break = ArgmaxTieBreak::kHigherLabel;
      } else if (value == "lower") {
        config.argmax_tie_break = ArgmaxTieBreak::kLowerLabel;
      } else {
        ThrowValidation("argmax_tie_break must be 'higher' or 'lower'");
      }
    } else if (key == "k_eval") {
      config.k_eval = ParseSmallInt(key, value);
    } else if (key == "relevant_threshold") {
      config.relevant_threshold = ParseSmallInt(key, value);
    } else if (key == "ndcg_gain") {
      if (value == "linear") {
        config.ndcg_gain = NdcgGain::kLinear;
      } else if (value == "exponential") {
        config.ndcg_gain = NdcgGain::kExponential;
      } else {
        ThrowValidation("ndcg_gain must be 'linear' or 'exponential'");
      }
    } else if (key == "rng_seed") {
      config.rng_seed = ParseUint(key, value);
    } else if (key == "temperature_schedule") {
      config.temperature_schedule = ParseDoubleList(key, value);
    } else if (key == "negatives_per_positive") {
      config.negatives_per_positive = ParseSmallInt(key, value);
    } else if (key == "density_cutoffs") {
      config.density_cutoffs = ParseDoubleList(key, value);
    } else {
      ThrowValidation(std::string(origin) + ": unknown key '" + key + "'");
    }
  }
  const auto check = ValidateConfig(config);
  if (!check.ok()) {
    std::string message = std::string(origin) + ": invalid config:";
    for (const auto& v : check.violations) message += "\n  " + v;
    ThrowValidation(message);
  }
  return config;
}

PipelineConfig LoadConfigFile(const std::string& path) {
  return ParseConfig(ReadTextFile(path), path);
}

std::string FormatConfig(const PipelineConfig& config) {
  std::ostringstream out;
  out << "alpha = " << FormatDouble(config.alpha) << '\n'
      << "beta = " << FormatDouble(config.beta) << '\n'
      << "gamma = " << FormatDouble(config.gamma) << '\n'
      << "mu_rel = " << FormatDouble(config.mu_rel) << '\n'
      << "lambda_eng = " << FormatDouble(config.lambda_eng) << '\n'
      << "kappa1 = " << FormatDouble(config.kappa1) << '\n'
      << "kappa2 = " << FormatDouble(config.kappa2) << '\n'
      << "lambda_counts = " << JoinDoubles(config.lambda_counts) << '\n'
      << "sigmoid_k = " << FormatDouble(config.sigmoid_k) << '\n'
      << "epsilon_norm = " << FormatDouble(config.epsilon_norm) << '\n';
  out << "channel_caps = ";
  bool first = true;
  for (const auto& [channel, cap] : config.channel_caps) {
    if (!first) out << ',';
    first = false;
    out << channel << ':' << cap;
  }
  out << '\n'
      << "stage_thresholds = " << JoinDoubles(config.stage_thresholds) << '\n'
      << "argmax_tie_break = "
      << (config.argmax_tie_break == ArgmaxTieBreak::kHigherLabel ? "higher"
                                                                  : "lower")
      << '\n'
      << "k_eval = " << config.k_eval << '\n'
      << "relevant_threshold = " << config.relevant_threshold << '\n'
      << "ndcg_gain = "
      << (config.ndcg_gain == NdcgGain::kLinear ? "linear" : "exponential")
      << '\n'
      << "rng_seed = " << config.rng_seed << '\n'
      << "temperature_schedule = " << JoinDoubles(config.temperature_schedule)
      << '\n'
      << "negatives_per_positive = " << config.negatives_per_positive << '\n'
      << "density_cutoffs = " << JoinDoubles(config.density_cutoffs) << '\n';
  return out.str();
}

}  // namespace unisup
