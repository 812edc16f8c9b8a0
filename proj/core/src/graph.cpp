#include "mlsbm/graph.hpp"

#include <algorithm>
#include <numeric>

namespace mlsbm {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::DirectedFull: return "directed-full";
    case Mode::UndirectedFull: return "undirected-full";
    case Mode::DirectedDiagonal: return "directed-diagonal";
    case Mode::UndirectedDiagonal: return "undirected-diagonal";
  }
  return "?";
}

Mode mode_from_name(const std::string& name) {
  if (name == "directed-full") return Mode::DirectedFull;
  if (name == "undirected-full") return Mode::UndirectedFull;
  if (name == "directed-diagonal") return Mode::DirectedDiagonal;
  if (name == "undirected-diagonal") return Mode::UndirectedDiagonal;
  throw UsageError("unknown mode '" + name +
                   "' (expected directed-full, undirected-full, directed-diagonal or "
                   "undirected-diagonal)");
}

bool LayerMask::contains(int i, int j) const {
  return std::binary_search(dyads.begin(), dyads.end(), Dyad{i, j});
}

void validate_mask(const MultilayerGraph& g, const LayerMask& mask) {
  if (mask.layer < 0 || mask.layer >= g.n_layers()) throw UsageError("mask layer out of range");
  for (std::size_t d = 0; d < mask.dyads.size(); ++d) {
    const Dyad& dy = mask.dyads[d];
    if (dy.i < 0 || dy.i >= g.n_nodes() || dy.j < 0 || dy.j >= g.n_nodes())
      throw UsageError("mask dyad out of range");
    if (dy.i == dy.j && !g.allow_self_loops())
      throw UsageError("mask contains a diagonal dyad but self-loops are disabled");
    if (!g.directed() && dy.i > dy.j)
      throw UsageError("undirected mask dyads must satisfy i <= j");
    if (d > 0 && !(mask.dyads[d - 1] < dy)) throw UsageError("mask dyads must be sorted unique");
  }
}

MultilayerGraph::MultilayerGraph(int n_nodes, int n_layers, bool directed, bool allow_self_loops,
                                 std::vector<std::vector<Edge>> layer_edges)
    : n_nodes_(n_nodes),
      n_layers_(n_layers),
      directed_(directed),
      allow_self_loops_(allow_self_loops),
      edges_(std::move(layer_edges)) {
  if (n_nodes_ < 1) throw UsageError("graph needs at least one node");
  if (n_layers_ < 1) throw UsageError("graph needs at least one layer");
  if (static_cast<int>(edges_.size()) != n_layers_)
    throw UsageError("edge lists do not match the layer count");
  for (auto& layer : edges_) {
    std::sort(layer.begin(), layer.end(),
              [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t e = 0; e < layer.size(); ++e) {
      const Edge& ed = layer[e];
      if (ed.i < 0 || ed.i >= n_nodes_ || ed.j < 0 || ed.j >= n_nodes_)
        throw UsageError("edge endpoint out of range");
      if (ed.weight < 1) throw UsageError("stored edge weights must be >= 1");
      if (ed.i == ed.j && !allow_self_loops_)
        throw UsageError("self-loop present but self-loops are disabled");
      if (!directed_ && ed.i > ed.j)
        throw UsageError("undirected edges must be stored with i <= j");
      if (e > 0 && layer[e - 1].i == ed.i && layer[e - 1].j == ed.j)
        throw UsageError("duplicate dyad in edge list");
    }
  }
  node_labels_.resize(n_nodes_);
  for (int i = 0; i < n_nodes_; ++i) node_labels_[i] = std::to_string(i);
  layer_names_.resize(n_layers_);
  for (int a = 0; a < n_layers_; ++a) layer_names_[a] = "layer" + std::to_string(a);
}

const std::vector<Edge>& MultilayerGraph::edges(int layer) const {
  if (layer < 0 || layer >= n_layers_) throw UsageError("layer index out of range");
  return edges_[layer];
}

long long MultilayerGraph::weight(int i, int j, int layer) const {
  if (i < 0 || i >= n_nodes_ || j < 0 || j >= n_nodes_)
    throw UsageError("node index out of range");
  if (!directed_ && i > j) std::swap(i, j);
  const auto& es = edges(layer);
  auto it = std::lower_bound(es.begin(), es.end(), Edge{i, j, 0}, [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  if (it != es.end() && it->i == i && it->j == j) return it->weight;
  return 0;
}

long long MultilayerGraph::total_weight(int layer) const {
  const auto& es = edges(layer);
  return std::accumulate(es.begin(), es.end(), 0LL,
                         [](long long s, const Edge& e) { return s + e.weight; });
}

long long MultilayerGraph::total_weight() const {
  long long s = 0;
  for (int a = 0; a < n_layers_; ++a) s += total_weight(a);
  return s;
}

std::size_t MultilayerGraph::n_edges(int layer) const { return edges(layer).size(); }

std::size_t MultilayerGraph::n_edges() const {
  std::size_t s = 0;
  for (int a = 0; a < n_layers_; ++a) s += edges_[a].size();
  return s;
}

std::size_t MultilayerGraph::n_dyads_per_layer() const {
  const std::size_t n = static_cast<std::size_t>(n_nodes_);
  if (directed_) return allow_self_loops_ ? n * n : n * (n - 1);
  return allow_self_loops_ ? n * (n + 1) / 2 : n * (n - 1) / 2;
}

void MultilayerGraph::set_node_labels(std::vector<std::string> labels) {
  if (static_cast<int>(labels.size()) != n_nodes_)
    throw UsageError("node label count does not match node count");
  node_labels_ = std::move(labels);
}

void MultilayerGraph::set_layer_names(std::vector<std::string> names) {
  if (static_cast<int>(names.size()) != n_layers_)
    throw UsageError("layer name count does not match layer count");
  layer_names_ = std::move(names);
}

MultilayerGraph MultilayerGraph::restricted_to_layers(const std::vector<int>& layers) const {
  if (layers.empty()) throw UsageError("layer selection must not be empty");
  std::vector<std::vector<Edge>> kept;
  std::vector<std::string> names;
  std::vector<bool> seen(n_layers_, false);
  for (int a : layers) {
    if (a < 0 || a >= n_layers_) throw UsageError("layer index out of range");
    if (seen[a]) throw UsageError("duplicate layer in selection");
    seen[a] = true;
    kept.push_back(edges_[a]);
    names.push_back(layer_names_[a]);
  }
  MultilayerGraph out(n_nodes_, static_cast<int>(layers.size()), directed_, allow_self_loops_,
                      std::move(kept));
  out.set_node_labels(node_labels_);
  out.set_layer_names(std::move(names));
  return out;
}

MultilayerGraph MultilayerGraph::without_masked_edges(const LayerMask& mask) const {
  if (mask.layer < 0 || mask.layer >= n_layers_) throw UsageError("mask layer out of range");
  auto kept = edges_;
  auto& layer = kept[mask.layer];
  layer.erase(std::remove_if(layer.begin(), layer.end(),
                             [&](const Edge& e) { return mask.contains(e.i, e.j); }),
              layer.end());
  MultilayerGraph out(n_nodes_, n_layers_, directed_, allow_self_loops_, std::move(kept));
  out.set_node_labels(node_labels_);
  out.set_layer_names(layer_names_);
  return out;
}

bool operator==(const MultilayerGraph& a, const MultilayerGraph& b) {
  return a.n_nodes_ == b.n_nodes_ && a.n_layers_ == b.n_layers_ && a.directed_ == b.directed_ &&
         a.allow_self_loops_ == b.allow_self_loops_ && a.edges_ == b.edges_ &&
         a.node_labels_ == b.node_labels_ && a.layer_names_ == b.layer_names_;
}

GraphBuilder::GraphBuilder(int n_nodes, int n_layers, bool directed, bool allow_self_loops)
    : n_nodes_(n_nodes),
      n_layers_(n_layers),
      directed_(directed),
      allow_self_loops_(allow_self_loops),
      acc_(static_cast<std::size_t>(std::max(n_layers, 0))) {
  if (n_nodes_ < 1) throw UsageError("graph needs at least one node");
  if (n_layers_ < 1) throw UsageError("graph needs at least one layer");
}

void GraphBuilder::add_weight(int layer, int i, int j, long long w) {
  if (layer < 0 || layer >= n_layers_) throw UsageError("layer index out of range");
  if (i < 0 || i >= n_nodes_ || j < 0 || j >= n_nodes_)
    throw UsageError("node index out of range");
  if (w < 0) throw UsageError("edge weights must be nonnegative");
  if (i == j && !allow_self_loops_) throw UsageError("self-loop not allowed in this graph");
  if (w == 0) return;
  if (!directed_ && i > j) std::swap(i, j);
  acc_[layer][{i, j}] += w;
}

MultilayerGraph GraphBuilder::build() const {
  std::vector<std::vector<Edge>> layers(acc_.size());
  for (std::size_t a = 0; a < acc_.size(); ++a) {
    layers[a].reserve(acc_[a].size());
    for (const auto& [key, w] : acc_[a]) layers[a].push_back(Edge{key.first, key.second, w});
  }
  return MultilayerGraph(n_nodes_, n_layers_, directed_, allow_self_loops_, std::move(layers));
}

}  // namespace mlsbm
