#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "mlsbm/benchmark.hpp"
#include "mlsbm/em.hpp"
#include "mlsbm/evaluation.hpp"
#include "mlsbm/model.hpp"
#include "oracles.hpp"

using namespace mlsbm;
using bench::BenchmarkSpec;

namespace {

// Fraction of positions where two label vectors agree.
double agreement(const std::vector<int>& a, const std::vector<int>& b) {
  int same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += (a[i] == b[i]);
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("correlated partitions: keep probability one clones the first layer") {
  auto parts = bench::correlated_partitions(50, 4, 5, 1.0, 3);
  REQUIRE(parts.size() == 4);
  for (int a = 1; a < 4; ++a) CHECK(parts[static_cast<std::size_t>(a)] == parts[0]);
  bench::GroundTruth t;
  t.k_groups = 5;
  t.partitions = parts;
  Matrix agg = t.aggregate_membership();
  for (int i = 0; i < 50; ++i) {
    CHECK(agg.row(i).sum() == 1.0);
    CHECK(agg.row(i).maxCoeff() == 1.0);  // one-hot
  }
}

TEST_CASE("correlated partitions: agreement statistics match the copy process") {
  const int n = 20000, K = 5;
  // keep_prob 0: independent layers, agreement ~ 1/K.
  auto ind = bench::correlated_partitions(n, 2, K, 0.0, 7);
  const double se0 = std::sqrt((1.0 / K) * (1.0 - 1.0 / K) / n);
  CHECK(std::abs(agreement(ind[0], ind[1]) - 1.0 / K) < 4.0 * se0);
  // generic keep_prob: adjacent agreement ~ p + (1 - p)/K.
  const double p = 0.6, q = p + (1.0 - p) / K;
  auto parts = bench::correlated_partitions(n, 3, K, p, 11);
  const double se = std::sqrt(q * (1.0 - q) / n);
  CHECK(std::abs(agreement(parts[0], parts[1]) - q) < 4.0 * se);
  CHECK(std::abs(agreement(parts[1], parts[2]) - q) < 4.0 * se);
  // non-adjacent layers decorrelate: agreement(0,2) ~ q^2 + (1-q^2-...)/K,
  // strictly below q for p in (0,1); just check the ordering.
  CHECK(agreement(parts[0], parts[2]) < agreement(parts[0], parts[1]));
}

TEST_CASE("aggregate membership entries are multiples of 1/L") {
  auto parts = bench::correlated_partitions(200, 3, 4, 0.5, 9);
  bench::GroundTruth t;
  t.k_groups = 4;
  t.partitions = parts;
  Matrix agg = t.aggregate_membership();
  for (int i = 0; i < 200; ++i) {
    CHECK(agg.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k < 4; ++k) {
      const double scaled = agg(i, k) * 3.0;
      CHECK(std::abs(scaled - std::llround(scaled)) < 1e-9);
    }
  }
}

TEST_CASE("degree sampling: truncation, degenerate support, analytic mean") {
  BenchmarkSpec spec;
  spec.n_nodes = 100000;
  auto d = bench::sample_degrees(spec, 5);
  REQUIRE(d.size() == 100000);
  double sum = 0.0;
  for (double x : d) {
    CHECK(x >= 3.0);
    CHECK(x <= 30.0);
    sum += x;
  }
  // Analytic mean and variance of P(k) proportional to k^-3 on {3..30}.
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  for (int k = 3; k <= 30; ++k) {
    const double pk = std::pow(static_cast<double>(k), -3.0);
    z += pk;
    m1 += k * pk;
    m2 += static_cast<double>(k) * k * pk;
  }
  m1 /= z;
  m2 /= z;
  const double se = std::sqrt((m2 - m1 * m1) / static_cast<double>(d.size()));
  CHECK(std::abs(sum / static_cast<double>(d.size()) - m1) < 4.0 * se);

  BenchmarkSpec flat;
  flat.min_degree = 7;
  flat.max_degree = 7;
  flat.n_nodes = 50;
  for (double x : bench::sample_degrees(flat, 2)) CHECK(x == 7.0);
}

TEST_CASE("single-layer sampler: mixing zero keeps every edge within its group") {
  const int n = 600;
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % 3;
  BenchmarkSpec spec;
  spec.n_nodes = n;
  auto degrees = bench::sample_degrees(spec, 8);
  auto edges = bench::dcsbm_layer(labels, degrees, 3, 0.0, 21);
  REQUIRE(edges.size() > 100);
  for (const Edge& e : edges) {
    CHECK(labels[static_cast<std::size_t>(e.i)] == labels[static_cast<std::size_t>(e.j)]);
    CHECK(e.i < e.j);  // undirected canonical, no self-loops
  }
}

TEST_CASE("single-layer sampler: mixing one matches the configuration-model rate") {
  const int n = 2000;
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % 4;
  BenchmarkSpec spec;
  spec.n_nodes = n;
  auto degrees = bench::sample_degrees(spec, 13);
  double s_total = 0.0, s_group[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    s_total += degrees[static_cast<std::size_t>(i)];
    s_group[labels[static_cast<std::size_t>(i)]] += degrees[static_cast<std::size_t>(i)];
  }
  double expect_within = 0.0;
  for (double s : s_group) expect_within += (s / s_total) * (s / s_total);
  auto edges = bench::dcsbm_layer(labels, degrees, 4, 1.0, 29);
  double within = 0.0;
  for (const Edge& e : edges)
    within += (labels[static_cast<std::size_t>(e.i)] == labels[static_cast<std::size_t>(e.j)]);
  const double frac = within / static_cast<double>(edges.size());
  const double se = std::sqrt(expect_within * (1.0 - expect_within) /
                              static_cast<double>(edges.size()));
  CHECK(std::abs(frac - expect_within) < 4.0 * se);
}

TEST_CASE("single-layer sampler: realized degrees track their targets") {
  const int n = 2000;
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % 4;
  BenchmarkSpec spec;
  spec.n_nodes = n;
  auto degrees = bench::sample_degrees(spec, 17);
  auto edges = bench::dcsbm_layer(labels, degrees, 4, 0.3, 31);
  std::vector<int> realized(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges) {
    realized[static_cast<std::size_t>(e.i)] += static_cast<int>(e.weight);
    realized[static_cast<std::size_t>(e.j)] += static_cast<int>(e.weight);
  }
  double dev = 0.0;
  int cnt = 0;
  for (int i = 0; i < n; ++i)
    if (degrees[static_cast<std::size_t>(i)] >= 10.0) {
      dev += std::abs(realized[static_cast<std::size_t>(i)] - degrees[static_cast<std::size_t>(i)]) /
             degrees[static_cast<std::size_t>(i)];
      ++cnt;
    }
  REQUIRE(cnt > 100);
  CHECK(dev / cnt <= 0.25);
}

TEST_CASE("full benchmark: shapes, determinism, degree scaling") {
  BenchmarkSpec spec;
  spec.n_nodes = 120;
  spec.seed = 41;
  bench::BenchmarkSample s = bench::generate_benchmark(spec);
  CHECK(s.graph.n_nodes() == 120);
  CHECK(s.graph.n_layers() == 4);
  CHECK_FALSE(s.graph.directed());
  CHECK_FALSE(s.graph.allow_self_loops());
  CHECK(s.truth.k_groups == 5);
  REQUIRE(s.truth.partitions.size() == 4);
  for (const auto& part : s.truth.partitions) CHECK(part.size() == 120);

  bench::BenchmarkSample again = bench::generate_benchmark(spec);
  CHECK(again.graph == s.graph);
  CHECK(again.truth.partitions == s.truth.partitions);

  // Halving flat target degrees halves the mean edge count within 10%.
  double e16 = 0.0, e8 = 0.0;
  for (int r = 0; r < 20; ++r) {
    BenchmarkSpec hi;
    hi.n_nodes = 400;
    hi.n_layers = 2;
    hi.min_degree = hi.max_degree = 16;
    hi.seed = 100 + static_cast<std::uint64_t>(r);
    BenchmarkSpec lo = hi;
    lo.min_degree = lo.max_degree = 8;
    e16 += static_cast<double>(bench::generate_benchmark(hi).graph.total_weight());
    e8 += static_cast<double>(bench::generate_benchmark(lo).graph.total_weight());
  }
  CHECK(e16 / e8 > 1.8);
  CHECK(e16 / e8 < 2.2);
}

TEST_CASE("full benchmark: identical partitions with no mixing are recoverable") {
  BenchmarkSpec spec;  // defaults: N=300, L=4, K=5, keep_prob=1, mixing=0
  spec.seed = 4242;
  bench::BenchmarkSample s = bench::generate_benchmark(spec);
  em::EmConfig cfg;
  cfg.k_groups = 5;
  cfg.mode = Mode::UndirectedFull;
  cfg.n_restarts = 4;
  cfg.seed = 7;
  em::FitResult fit = em::run_em(s.graph, cfg);
  const Matrix got = normalize_membership(fit.params.u);
  const Matrix want = s.truth.aggregate_membership();
  eval::MatchResult m = eval::best_permutation_match(want, got, eval::MatchMetric::Cosine);
  CHECK(m.score >= 0.95);
}

TEST_CASE("structure archetypes produce the documented affinity patterns") {
  Matrix a = bench::structure_affinity(bench::LayerStructure::Assortative, 0.04, 0.004, 0.002);
  CHECK(a(0, 0) == 0.04);
  CHECK(a(1, 1) == 0.04);
  CHECK(a(0, 1) == 0.004);
  CHECK(a(1, 0) == 0.004);
  Matrix d = bench::structure_affinity(bench::LayerStructure::Disassortative, 0.04, 0.004, 0.002);
  CHECK(d(0, 1) == 0.04);
  CHECK(d(0, 0) == 0.004);
  Matrix c = bench::structure_affinity(bench::LayerStructure::CorePeriphery, 0.08, 0.008, 0.004);
  CHECK(c(0, 0) == 0.08);   // core
  CHECK(c(1, 1) == 0.004);  // periphery
  Matrix b = bench::structure_affinity(bench::LayerStructure::DirectedBias, 0.08, 0.008, 0.004);
  CHECK(b(0, 1) == 0.08);
  CHECK(b(1, 0) == 0.004);  // weak return flow
}

TEST_CASE("mixed-structure presets hit the documented expected edge counts") {
  // Expected per-layer totals over the directed-with-self-pairs universe:
  // G1/G3 layers 1980; G2 layers 3960, 3960, 2250, 2250.
  bench::MixedSample g1 = bench::generate_mixed_structure(bench::g1_spec(3));
  REQUIRE(g1.graph.n_layers() == 2);
  CHECK(g1.graph.directed());
  CHECK(g1.graph.n_nodes() == 300);
  for (int a = 0; a < 2; ++a)
    CHECK(std::abs(static_cast<double>(g1.graph.total_weight(a)) - 1980.0) <=
          4.0 * std::sqrt(1980.0));

  bench::MixedSample g2 = bench::generate_mixed_structure(bench::g2_spec(4));
  REQUIRE(g2.graph.n_layers() == 4);
  const double want2[4] = {3960.0, 3960.0, 2250.0, 2250.0};
  for (int a = 0; a < 4; ++a)
    CHECK(std::abs(static_cast<double>(g2.graph.total_weight(a)) - want2[a]) <=
          4.0 * std::sqrt(want2[a]));

  bench::MixedSample g3 = bench::generate_mixed_structure(bench::g3_spec(5));
  REQUIRE(g3.graph.n_layers() == 4);
  for (int a = 0; a < 4; ++a)
    CHECK(std::abs(static_cast<double>(g3.graph.total_weight(a)) - 1980.0) <=
          4.0 * std::sqrt(1980.0));

  // Planted parameters: one-hot halves, affinities equal to the archetypes.
  CHECK(g1.planted.u(0, 0) == 1.0);
  CHECK(g1.planted.u(299, 1) == 1.0);
  CHECK(g1.planted.u.sum() == 300.0);
  CHECK((g1.planted.w[0] -
         bench::structure_affinity(bench::LayerStructure::Assortative, 0.04, 0.004, 0.004))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  for (const auto& part : g1.truth.partitions)
    for (int i = 0; i < 300; ++i) CHECK(part[static_cast<std::size_t>(i)] == (i < 150 ? 0 : 1));

  // Determinism.
  bench::MixedSample again = bench::generate_mixed_structure(bench::g1_spec(3));
  CHECK(again.graph == g1.graph);
}

TEST_CASE("assortative layer with zero off-rate never crosses the groups") {
  bench::MixedStructureSpec spec;
  spec.n_nodes = 100;
  spec.layers = {bench::LayerStructure::Assortative};
  spec.on = 0.1;
  spec.off = 0.0;
  spec.weak = 0.0;
  spec.seed = 9;
  bench::MixedSample s = bench::generate_mixed_structure(spec);
  REQUIRE(s.graph.n_edges(0) > 0);
  for (const Edge& e : s.graph.edges(0)) CHECK((e.i < 50) == (e.j < 50));
}
