#include <benchmark/benchmark.h>

#include <map>

#include "graphimpute/graphimpute.hpp"

using namespace graphimpute;

namespace {

SynthDataset make_data(std::size_t items) {
  SynthParams p;
  p.n_items = items;
  p.n_users = items * 2;
  p.modalities = {{"visual", 32}};
  p.seed = 1;
  return synth_generate(p);
}

const SynthDataset& data(std::size_t items) {
  static std::map<std::size_t, SynthDataset> cache;
  auto it = cache.find(items);
  if (it == cache.end()) it = cache.emplace(items, make_data(items)).first;
  return it->second;
}

FeatureSet masked(std::size_t items) { return mask_features(data(items).features, 0.2, 1).masked; }

void bm_cooccurrence(benchmark::State& state) {
  const auto& r = data(state.range(0)).interactions;
  for (auto _ : state) benchmark::DoNotOptimize(cooccurrence(r));
}

void bm_topk(benchmark::State& state) {
  const auto g = cooccurrence(data(state.range(0)).interactions);
  for (auto _ : state) benchmark::DoNotOptimize(topk_sparsify(g, 20));
}

void bm_neigh_mean(benchmark::State& state) {
  const auto f = masked(state.range(0));
  const auto g = topk_sparsify(cooccurrence(data(state.range(0)).interactions), 20);
  for (auto _ : state) benchmark::DoNotOptimize(impute_neigh_mean(f, g, ColdFallback::GlobalMean));
}

void bm_multihop(benchmark::State& state) {
  const auto f = masked(state.range(0));
  const auto op = sym_norm_adjacency(topk_sparsify(cooccurrence(data(state.range(0)).interactions), 20));
  for (auto _ : state) benchmark::DoNotOptimize(impute_multihop(f, op, 10, ColdFallback::GlobalMean));
}

void bm_ppr(benchmark::State& state, PprMode mode) {
  const auto f = masked(state.range(0));
  const auto g = topk_sparsify(cooccurrence(data(state.range(0)).interactions), 20);
  PprOptions opts;
  opts.mode = mode;
  for (auto _ : state) benchmark::DoNotOptimize(impute_pers_pagerank(f, g, opts));
}

void bm_ppr_exact_operator(benchmark::State& state) {
  const auto g = topk_sparsify(cooccurrence(data(state.range(0)).interactions), 20);
  for (auto _ : state) benchmark::DoNotOptimize(ppr_exact(g, 0.85));
}

}  // namespace

BENCHMARK(bm_cooccurrence)->Arg(200)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_topk)->Arg(200)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_neigh_mean)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_multihop)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_ppr, iterative, PprMode::Iterative)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_ppr, exact, PprMode::Exact)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_ppr_exact_operator)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
