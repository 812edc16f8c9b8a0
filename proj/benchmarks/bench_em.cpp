// Microbenchmarks for the inner loops that dominate a fit: the per-sweep EM
// updates (expected O(M K^2)), likelihood evaluation, and AUC scoring. The
// graph arguments double the edge count M so linear scaling shows up directly
// in the reported times.

#include <benchmark/benchmark.h>

#include "mlsbm/benchmark.hpp"
#include "mlsbm/em.hpp"
#include "mlsbm/evaluation.hpp"
#include "mlsbm/model.hpp"
#include "mlsbm/rng.hpp"

namespace {

using namespace mlsbm;

// Flat-degree single layer: N = 2000, degree d gives M = 1000 d edges.
MultilayerGraph flat_degree_graph(int degree) {
  bench::BenchmarkSpec spec;
  spec.n_nodes = 2000;
  spec.n_layers = 1;
  spec.min_degree = degree;
  spec.max_degree = degree;
  spec.seed = 99;
  return bench::generate_benchmark(spec).graph;
}

em::EmConfig sweep_config() {
  em::EmConfig cfg;
  cfg.k_groups = 5;
  cfg.mode = Mode::UndirectedFull;
  cfg.seed = 1;
  return cfg;
}

void bm_em_sweep(benchmark::State& state) {
  const MultilayerGraph g = flat_degree_graph(static_cast<int>(state.range(0)));
  ModelParams p = em::init_params(g, sweep_config(), 7);
  for (auto _ : state) {
    em::Responsibilities rho = em::update_rho(g, p);
    p.u = em::update_u(g, p, rho);
    p.v = p.u;
    p.w = em::update_w(g, p, rho);
    benchmark::DoNotOptimize(p.w.front().sum());
  }
  state.SetItemsProcessed(state.iterations() * g.total_weight());
}
BENCHMARK(bm_em_sweep)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void bm_responsibilities(benchmark::State& state) {
  const MultilayerGraph g = flat_degree_graph(static_cast<int>(state.range(0)));
  const ModelParams p = em::init_params(g, sweep_config(), 7);
  for (auto _ : state) {
    em::Responsibilities rho = em::update_rho(g, p);
    benchmark::DoNotOptimize(rho.front().front()(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * g.total_weight());
}
BENCHMARK(bm_responsibilities)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void bm_log_likelihood(benchmark::State& state) {
  const MultilayerGraph g = flat_degree_graph(static_cast<int>(state.range(0)));
  const ModelParams p = em::init_params(g, sweep_config(), 7);
  for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(g, p));
}
BENCHMARK(bm_log_likelihood)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void bm_auc(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  eval::PredictionScores ps;
  for (int i = 0; i < n; ++i) {
    eval::ScoredDyad d;
    d.i = i;
    d.j = i + 1;
    d.score = 0.125 * static_cast<double>(derive_seed(5, static_cast<std::uint64_t>(i)) % 9);
    d.is_link = i % 3 == 0;
    ps.entries.push_back(d);
  }
  for (auto _ : state) benchmark::DoNotOptimize(eval::auc(ps));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_auc)->Arg(1 << 12)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
