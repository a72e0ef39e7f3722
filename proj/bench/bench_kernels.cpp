// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "cubespec/harness.hpp"
#include "cubespec/kernels.hpp"
#include "cubespec/sampler.hpp"
#include "cubespec/spectral.hpp"

using namespace cubespec;

namespace {

const SubgraphSample& fixture(int n, double p) {
  static std::vector<std::pair<std::pair<int, double>, SubgraphSample>> cache;
  for (const auto& [key, s] : cache)
    if (key.first == n && key.second == p) return s;
  cache.emplace_back(std::pair{n, p}, sample_subgraph(Dimension(n), EdgeProbability(p), 1));
  return cache.back().second;
}

template <bool Parallel>
void BM_AdjacencyApply(benchmark::State& state) {
  const auto& s = fixture(static_cast<int>(state.range(0)), 0.3);
  const auto& g = s.graph();
  std::vector<double> x(g.size(), 1.0), y(g.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::adjacency_apply(g, x, y);
    else
      kernels::adjacency_apply_serial(g, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.targets().size()));
}

template <bool Parallel>
void BM_Dot(benchmark::State& state) {
  std::vector<double> a(static_cast<std::size_t>(state.range(0)), 0.5), b(a.size(), 2.0);
  for (auto _ : state) {
    double d = Parallel ? kernels::dot(a, b) : kernels::dot_serial(a, b);
    benchmark::DoNotOptimize(d);
  }
}

template <bool Parallel>
void BM_BernoulliEdges(benchmark::State& state) {
  const Dimension n(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto ids = Parallel ? kernels::bernoulli_edges(n, 0.01, 7) : kernels::bernoulli_edges_serial(n, 0.01, 7);
    benchmark::DoNotOptimize(ids.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(edge_count(n)));
}

void BM_SampleSparse(benchmark::State& state) {
  const Dimension n(static_cast<int>(state.range(0)));
  const EdgeProbability p(0.01);
  for (auto _ : state) benchmark::DoNotOptimize(sample_subgraph(n, p, 7, SamplingStrategy::sparse));
}

void BM_LambdaMax(benchmark::State& state) {
  const auto& s = fixture(static_cast<int>(state.range(0)), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(lambda_max(s).value);
}

// Whole experiment: threads = 1 against the OpenMP default team.
void BM_Experiment(benchmark::State& state) {
  ExperimentConfig c;
  c.n_values = {14};
  c.family = ProbabilityFamily::polynomial(1.5);
  c.trials = 32;
  c.checks = {Check::lambda_vs_sqrt_delta, Check::delta_vs_kappa};
  c.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c).records.size());
  state.SetItemsProcessed(state.iterations() * c.trials);
}

}  // namespace

BENCHMARK(BM_AdjacencyApply<false>)->Arg(14)->Arg(18);
BENCHMARK(BM_AdjacencyApply<true>)->Arg(14)->Arg(18);
BENCHMARK(BM_Dot<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_Dot<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_BernoulliEdges<false>)->Arg(16);
BENCHMARK(BM_BernoulliEdges<true>)->Arg(16);
BENCHMARK(BM_SampleSparse)->Arg(16)->Arg(20);
BENCHMARK(BM_LambdaMax)->Arg(12)->Arg(16);
BENCHMARK(BM_Experiment)->Arg(1)->Arg(0)->UseRealTime();

BENCHMARK_MAIN();
