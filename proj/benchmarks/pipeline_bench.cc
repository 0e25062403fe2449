#include <benchmark/benchmark.h>

#include "unisup/curriculum.h"
#include "unisup/evalkit.h"
#include "unisup/pipeline.h"
#include "unisup/synthgen.h"

namespace unisup {
namespace {

SynthSpec BenchSpec(int queries) {
  SynthSpec spec;
  spec.n_queries = queries;
  spec.items_per_query = 100;
  spec.dimension = 64;
  return spec;
}

const SynthCorpus& Corpus() {
  static const SynthCorpus corpus = Generate(BenchSpec(200));
  return corpus;
}

void BM_TopK(benchmark::State& state) {
  const auto& corpus = Corpus();
  const auto query = corpus.queries.vector(0);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(TopK(query, corpus.items, k));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(corpus.items.size()));
}
BENCHMARK(BM_TopK)->Arg(25)->Arg(250);

void BM_ScoreCorpus(benchmark::State& state) {
  const auto& corpus = Corpus();
  const auto config = ConfigForSpec(BenchSpec(200));
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ScoreCorpus(corpus.records, config, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(corpus.records.size()));
}
BENCHMARK(BM_ScoreCorpus)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Sample(benchmark::State& state) {
  const auto& corpus = Corpus();
  const auto config = ConfigForSpec(BenchSpec(200));
  const auto targets = ScoreCorpus(corpus.records, config);
  const auto plan = BuildPlan(targets, 1.0, 4, config);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(Sample(plan, ++seed));
}
BENCHMARK(BM_Sample)->Unit(benchmark::kMillisecond);

void BM_Ndcg(benchmark::State& state) {
  RankedList list;
  std::vector<int> pool;
  for (int i = 0; i < 100; ++i) pool.push_back(i * 7 % 5);
  for (int i = 0; i < 25; ++i) list.items.push_back({.item_id = "i", .rating = pool[static_cast<std::size_t>(i)]});
  for (auto _ : state) benchmark::DoNotOptimize(NdcgAtK(list, pool, NdcgGain::kExponential));
}
BENCHMARK(BM_Ndcg);

}  // namespace
}  // namespace unisup

BENCHMARK_MAIN();
