#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mlsbm/defs.hpp"
#include "mlsbm/errors.hpp"

namespace mlsbm {

// One observed dyad of a single layer. Undirected graphs store the canonical
// orientation i <= j; directed graphs keep (source, target) as given.
struct Edge {
  int i = 0;
  int j = 0;
  long long weight = 0;  // >= 1 for stored edges

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.i == b.i && a.j == b.j && a.weight == b.weight;
  }
};

// A set of held-out dyads on one layer. Dyads use the same canonical
// orientation as the graph they were drawn from and are kept sorted.
struct Dyad {
  int i = 0;
  int j = 0;
  friend bool operator==(const Dyad& a, const Dyad& b) { return a.i == b.i && a.j == b.j; }
  friend bool operator<(const Dyad& a, const Dyad& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  }
};

struct LayerMask {
  int layer = 0;
  std::vector<Dyad> dyads;  // sorted, unique, canonical orientation

  bool contains(int i, int j) const;  // expects canonical orientation
};

class MultilayerGraph;

// Checks that the mask targets a valid layer and that its dyads are sorted,
// unique, in range, canonically oriented and on the graph's dyad universe.
void validate_mask(const MultilayerGraph& g, const LayerMask& mask);

// Immutable multilayer network with integer edge weights. Per-layer edge
// lists are sorted by (i, j); this ordering is the canonical enumeration and
// everything downstream (responsibilities, serialization) is aligned to it.
class MultilayerGraph {
 public:
  MultilayerGraph() = default;
  MultilayerGraph(int n_nodes, int n_layers, bool directed, bool allow_self_loops,
                  std::vector<std::vector<Edge>> layer_edges);

  int n_nodes() const { return n_nodes_; }
  int n_layers() const { return n_layers_; }
  bool directed() const { return directed_; }
  bool allow_self_loops() const { return allow_self_loops_; }

  const std::vector<Edge>& edges(int layer) const;
  // Weight at (i, j) in `layer`; orientation is canonicalized internally for
  // undirected graphs. Zero for non-edges.
  long long weight(int i, int j, int layer) const;
  long long total_weight(int layer) const;
  long long total_weight() const;
  std::size_t n_edges(int layer) const;
  std::size_t n_edges() const;

  // Number of dyads in one layer's universe under the directedness and
  // self-loop convention of this graph.
  std::size_t n_dyads_per_layer() const;

  // Node labels default to "0", "1", ... and always have size n_nodes().
  const std::vector<std::string>& node_labels() const { return node_labels_; }
  void set_node_labels(std::vector<std::string> labels);
  // Layer names default to "layer0", "layer1", ...
  const std::vector<std::string>& layer_names() const { return layer_names_; }
  void set_layer_names(std::vector<std::string> names);

  // Subgraph keeping `layers` in the given order (indices must be unique and
  // in range). Node set is unchanged.
  MultilayerGraph restricted_to_layers(const std::vector<int>& layers) const;

  // Copy with all edges at masked dyads of mask.layer removed. The result is
  // the training graph for masked EM.
  MultilayerGraph without_masked_edges(const LayerMask& mask) const;

  friend bool operator==(const MultilayerGraph& a, const MultilayerGraph& b);

 private:
  int n_nodes_ = 0;
  int n_layers_ = 0;
  bool directed_ = true;
  bool allow_self_loops_ = true;
  std::vector<std::vector<Edge>> edges_;  // [layer], sorted by (i, j)
  std::vector<std::string> node_labels_;
  std::vector<std::string> layer_names_;
};

// Accumulates weights per dyad (duplicates sum), canonicalizes orientation
// for undirected graphs, and validates ranges before producing a graph.
class GraphBuilder {
 public:
  GraphBuilder(int n_nodes, int n_layers, bool directed, bool allow_self_loops);
  void add_weight(int layer, int i, int j, long long w);
  MultilayerGraph build() const;

 private:
  int n_nodes_;
  int n_layers_;
  bool directed_;
  bool allow_self_loops_;
  std::vector<std::map<std::pair<int, int>, long long>> acc_;
};

// Visits every dyad (i, j) of the universe shared by all layers:
// directed visits ordered pairs, undirected visits i <= j, and the diagonal
// is included only when self-loops are allowed.
template <class F>
void for_each_dyad(const MultilayerGraph& g, F&& f) {
  const int n = g.n_nodes();
  if (g.directed()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j && !g.allow_self_loops()) continue;
        f(i, j);
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = g.allow_self_loops() ? i : i + 1; j < n; ++j) f(i, j);
  }
}

}  // namespace mlsbm
