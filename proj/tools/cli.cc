#include "cli.h"

#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "unisup/config_io.h"
#include "unisup/curriculum.h"
#include "unisup/embedding_io.h"
#include "unisup/error.h"
#include "unisup/kv_file.h"
#include "unisup/pipeline.h"
#include "unisup/record_io.h"
#include "unisup/synthgen.h"

namespace unisup::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  // synth
  std::string spec_path;
  std::optional<std::uint64_t> synth_seed;
  // shared
  std::string out_path;
  std::string config_path;
  int threads = 1;
  // score
  std::string corpus_path;
  std::string ablation;
  // sample
  std::string targets_path;
  std::optional<double> temperature;
  std::uint64_t seed = 0;
  std::optional<int> negatives_per_positive;
  std::size_t epoch = 0;
  // evaluate
  std::string embeddings_path;
  std::string query_embeddings_path;
  std::string scores_path;
  std::optional<int> k;
  // compare
  std::string run_a;
  std::string run_b;
};

PipelineConfig ConfigOrDefault(const std::string& path) {
  return path.empty() ? LoadDefaultConfig() : LoadConfigFile(path);
}

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    ThrowIo("cannot create directory '" + dir + "': " + ec.message());
  }
}

void RequireFile(const std::string& path) {
  if (!fs::is_regular_file(path)) ThrowIo("no such file '" + path + "'");
}

int Synth(const Options& o, std::ostream& out, std::ostream& err) {
  RequireFile(o.spec_path);
  SynthSpec spec = LoadSynthSpec(o.spec_path);
  if (o.synth_seed) spec.seed = *o.synth_seed;
  err << "synth: generating " << spec.n_queries << " queries x "
      << spec.items_per_query << " items\n";
  const auto corpus = Generate(spec);
  EnsureDirectory(o.out_path);
  const fs::path dir(o.out_path);
  WriteTextFile((dir / "corpus.jsonl").string(), FormatCorpus(corpus.records));
  SaveEmbeddings(corpus.items, (dir / "items.emb").string());
  SaveEmbeddings(corpus.queries, (dir / "queries.emb").string());
  WriteTextFile((dir / "config.txt").string(), FormatConfig(ConfigForSpec(spec)));
  out << "{\"records\":" << corpus.records.size()
      << ",\"queries\":" << corpus.queries.size()
      << ",\"dimension\":" << spec.dimension << "}\n";
  return 0;
}

int Score(const Options& o, std::ostream& out, std::ostream& err) {
  RequireFile(o.corpus_path);
  PipelineConfig config = ConfigOrDefault(o.config_path);
  if (o.ablation == "rel-only") config = RelOnly(config);
  const auto records = LoadCorpus(o.corpus_path);
  err << "score: " << records.size() << " records\n";
  const auto targets = ScoreCorpus(records, config, o.threads);
  WriteTextFile(o.out_path, FormatTargets(targets));
  out << ScoreSummaryToJson(Summarize(targets)) << '\n';
  return 0;
}

int SampleCommand(const Options& o, std::ostream& out, std::ostream& err) {
  RequireFile(o.targets_path);
  const PipelineConfig config = ConfigOrDefault(o.config_path);
  const auto targets = ParseTargets(ReadTextFile(o.targets_path), o.targets_path);
  const double temperature =
      o.temperature ? *o.temperature : TemperatureForEpoch(config, o.epoch);
  const int per_positive =
      o.negatives_per_positive.value_or(config.negatives_per_positive);
  const auto plan = BuildPlan(targets, temperature, per_positive, config);
  for (const auto& issue : plan.issues) err << "sample: " << issue << '\n';
  const auto sampled = Sample(plan, o.seed, o.threads);
  const auto summary = EmitDataset(targets, sampled, o.out_path);
  out << SummaryToJson(summary) << '\n';
  return 0;
}

int Evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  RequireFile(o.corpus_path);
  PipelineConfig config = ConfigOrDefault(o.config_path);
  if (o.k) config.k_eval = *o.k;
  if (config.k_eval < 1) throw Error(ErrorKind::kUsage, "--k must be >= 1");
  const auto k = static_cast<std::size_t>(config.k_eval);

  const auto records = LoadCorpus(o.corpus_path);
  const auto judged = JudgeCorpus(records, config, o.threads);
  std::vector<RankedList> lists;
  if (!o.scores_path.empty()) {
    RequireFile(o.scores_path);
    const auto scored = ParseTargets(ReadTextFile(o.scores_path), o.scores_path);
    err << "evaluate: ranking " << judged.size() << " queries by target scores\n";
    lists = RankByScores(judged, scored, k);
  } else {
    if (o.embeddings_path.empty()) {
      throw Error(ErrorKind::kUsage, "evaluate needs --embeddings or --scores");
    }
    RequireFile(o.embeddings_path);
    std::string query_path = o.query_embeddings_path;
    if (query_path.empty()) {
      query_path = (fs::path(o.embeddings_path).parent_path() / "queries.emb").string();
    }
    RequireFile(query_path);
    const auto items = LoadEmbeddings(o.embeddings_path);
    const auto queries = LoadEmbeddings(query_path);
    err << "evaluate: exact top-" << k << " over " << items.size() << " items for "
        << judged.size() << " queries\n";
    lists = RetrieveByEmbedding(judged, items, queries, k, o.threads);
  }
  const auto result = EvaluateRuns(lists, config, o.threads);
  EnsureDirectory(o.out_path);
  const fs::path dir(o.out_path);
  WriteTextFile((dir / "per_query.tsv").string(),
                FormatMetricTable(result.per_query, config.density_cutoffs));
  WriteTextFile((dir / "density.tsv").string(),
                FormatDensityCurve(config.density_cutoffs, result.summary.density));
  const auto report = EvaluationReportToJson(result, config, k);
  WriteTextFile((dir / "report.json").string(), report + "\n");
  out << report << '\n';
  return 0;
}

std::vector<QueryMetrics> LoadRun(const std::string& path,
                                  std::vector<double>* cutoffs) {
  std::string file = path;
  if (fs::is_directory(path)) file = (fs::path(path) / "per_query.tsv").string();
  RequireFile(file);
  return ParseMetricTable(ReadTextFile(file), cutoffs, file);
}

int Compare(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<double> cutoffs_a, cutoffs_b;
  const auto a = LoadRun(o.run_a, &cutoffs_a);
  const auto b = LoadRun(o.run_b, &cutoffs_b);
  if (cutoffs_a != cutoffs_b) {
    ThrowValidation("runs use different density cutoffs");
  }
  const auto report = CompareReportToJson(CompareMetricTables(a, b, cutoffs_a));
  if (o.out_path.empty()) {
    out << report << '\n';
  } else {
    WriteTextFile(o.out_path, report + "\n");
  }
  return 0;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Unified supervision targets and retrieval evaluation"};
  app.name(args.empty() ? "unisup" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--spec", o.spec_path, "Synthetic corpus spec file")->required();
  synth->add_option("--out", o.out_path, "Output directory")->required();
  synth->add_option("--seed", o.synth_seed, "Override the spec seed");

  auto* score = app.add_subcommand("score", "Build supervision targets");
  score->add_option("--in", o.corpus_path, "Corpus (JSON lines)")->required();
  score->add_option("--config", o.config_path, "Pipeline config file");
  score->add_option("--out", o.out_path, "Targets output (JSON lines)")->required();
  score->add_option("--ablation", o.ablation, "Ablation variant")
      ->check(CLI::IsMember({"rel-only"}));
  score->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* sample = app.add_subcommand("sample", "Sample negatives and emit a dataset");
  sample->add_option("--targets", o.targets_path, "Targets from `score`")->required();
  sample->add_option("--temperature", o.temperature, "Sampling temperature")
      ->check(CLI::PositiveNumber);
  sample->add_option("--epoch", o.epoch, "Epoch index into temperature_schedule");
  sample->add_option("--seed", o.seed, "Sampling seed")->required();
  sample->add_option("--negatives-per-positive", o.negatives_per_positive,
                     "Negatives drawn per positive")
      ->check(CLI::NonNegativeNumber);
  sample->add_option("--config", o.config_path, "Pipeline config file");
  sample->add_option("--out", o.out_path, "Dataset output (JSON lines)")->required();
  sample->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* evaluate = app.add_subcommand("evaluate", "Retrieve top-K and compute metrics");
  evaluate->add_option("--corpus", o.corpus_path, "Judged corpus")->required();
  evaluate->add_option("--embeddings", o.embeddings_path, "Item embedding file");
  evaluate->add_option("--query-embeddings", o.query_embeddings_path,
                       "Query embedding file (default: queries.emb next to --embeddings)");
  evaluate->add_option("--scores", o.scores_path,
                       "Rank candidates by the targets in this file instead");
  evaluate->add_option("--config", o.config_path, "Pipeline config file");
  evaluate->add_option("--k", o.k, "Retrieval depth (default 25)");
  evaluate->add_option("--out", o.out_path, "Output directory")->required();
  evaluate->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "Compare two evaluation runs");
  compare->add_option("--run-a", o.run_a, "Control run (dir or per_query.tsv)")->required();
  compare->add_option("--run-b", o.run_b, "Variant run (dir or per_query.tsv)")->required();
  compare->add_option("--out", o.out_path, "Report output (default stdout)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("unisup");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return static_cast<int>(ErrorKind::kUsage);
  }

  try {
    if (synth->parsed()) return Synth(o, out, err);
    if (score->parsed()) return Score(o, out, err);
    if (sample->parsed()) return SampleCommand(o, out, err);
    if (evaluate->parsed()) return Evaluate(o, out, err);
    if (compare->parsed()) return Compare(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::kIo);
  }
  return static_cast<int>(ErrorKind::kUsage);
}

}  // namespace unisup::cli
