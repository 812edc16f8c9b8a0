#pragma once

#include <cstdint>
#include <vector>

#include "mlsbm/graph.hpp"
#include "mlsbm/model.hpp"

namespace mlsbm::bench {

// Multilayer degree-corrected benchmark with tunable partition correlation
// across layers (keep_prob) and within/between mixing (mixing).
struct BenchmarkSpec {
  int n_nodes = 300;
  int n_layers = 4;
  int k_groups = 5;
  double keep_prob = 1.0;        // chance a node keeps its previous-layer label
  double mixing = 0.0;           // fraction of degree attached irrespective of groups
  double degree_exponent = -3.0;
  int min_degree = 3;
  int max_degree = 30;
  std::uint64_t seed = 1;
};

struct GroundTruth {
  int k_groups = 0;
  std::vector<std::vector<int>> partitions;  // [layer][node]
  // Aggregate membership: entry (i, k) is the fraction of layers assigning
  // node i to group k (exact multiples of 1/L).
  Matrix aggregate_membership() const;
};

// Layer 0 is uniform over groups; each subsequent layer keeps a node's label
// with probability keep_prob and redraws uniformly otherwise. Expected
// agreement between adjacent layers is keep_prob + (1 - keep_prob) / K.
std::vector<std::vector<int>> correlated_partitions(int n_nodes, int n_layers, int k_groups,
                                                    double keep_prob, std::uint64_t seed);

// Truncated power law on {min_degree, ..., max_degree} with
// P(d) proportional to d^degree_exponent.
std::vector<double> sample_degrees(const BenchmarkSpec& spec, std::uint64_t seed);

// One undirected simple layer by degree-proportional stub pairing:
// round((1 - mixing) * S_g / 2) within-group edges per group g plus
// round(mixing * S / 2) group-oblivious edges, where S_g and S are group and
// total degree sums. Self-loops and duplicate dyads are dropped, not redrawn.
std::vector<Edge> dcsbm_layer(const std::vector<int>& labels, const std::vector<double>& degrees,
                              int k_groups, double mixing, std::uint64_t seed);

struct BenchmarkSample {
  MultilayerGraph graph;  // undirected, no self-loops
  GroundTruth truth;
};

// Full pipeline: correlated partitions, an independent degree draw per layer,
// one stub-paired layer each. Deterministic in spec.seed.
BenchmarkSample generate_benchmark(const BenchmarkSpec& spec);

// Two-group planted archetypes used by the mixed-structure suites. With
// on > off > weak: assortative and disassortative are symmetric patterns,
// core-periphery has one dense group and one weak group, directed-bias sends
// most weight from group 0 to group 1 and little back.
enum class LayerStructure { Assortative, Disassortative, CorePeriphery, DirectedBias };

Matrix structure_affinity(LayerStructure s, double on, double off, double weak);

struct MixedStructureSpec {
  int n_nodes = 300;  // split into two equal groups, first half = group 0
  std::vector<LayerStructure> layers;
  double on = 0.04;
  double off = 0.004;
  double weak = 0.004;
  std::uint64_t seed = 1;
};

// Canonical suites. G1: assortative + disassortative at 0.04/0.004.
// G2: one layer of each archetype at 0.08/0.008/0.004.
// G3: two assortative + two disassortative at 0.04/0.004.
MixedStructureSpec g1_spec(std::uint64_t seed);
MixedStructureSpec g2_spec(std::uint64_t seed);
MixedStructureSpec g3_spec(std::uint64_t seed);

struct MixedSample {
  MultilayerGraph graph;  // directed, self-loops allowed
  ModelParams planted;    // one-hot memberships and the planted affinities
  GroundTruth truth;
};

MixedSample generate_mixed_structure(const MixedStructureSpec& spec);

}  // namespace mlsbm::bench
