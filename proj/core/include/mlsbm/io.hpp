#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlsbm/evaluation.hpp"
#include "mlsbm/graph.hpp"

namespace mlsbm::io {

// Edge-list format, whitespace separated:
//   src tgt w_1 ... w_L
// with nonnegative integer weights (duplicate dyad lines accumulate). Lines
// starting with '#' are comments except for the optional directives
//   # directed=<true|false> layers=<L> names=<name1,name2,...>
//   # nodes=<label1,label2,...>
// The nodes directive pins label order and preserves isolated nodes across a
// round trip. Labels map to indices in order of first appearance. Without a
// directed directive the graph is directed; self-loops are enabled for
// directed graphs, and otherwise only when a diagonal entry is present.
struct ParseOptions {
  std::optional<bool> directed;
  std::optional<bool> allow_self_loops;
};

MultilayerGraph read_edge_list(const std::string& path, const ParseOptions& opts = {});
void write_edge_list(const MultilayerGraph& g, const std::string& path);

// Membership format: one row per node, "label x_1 ... x_K", full precision.
struct Membership {
  std::vector<std::string> labels;
  Matrix values;
};

Membership read_membership(const std::string& path);
void write_membership(const std::vector<std::string>& labels, const Matrix& values,
                      const std::string& path);

// Affinity format per layer: "# layer <index> <name>" followed by K rows of K
// values.
std::vector<Matrix> read_affinities(const std::string& path,
                                    std::vector<std::string>* layer_names = nullptr);
void write_affinities(const std::vector<Matrix>& w, const std::vector<std::string>& layer_names,
                      const std::string& path);

// Holdout mask as "layer i j fold" rows (node indices).
eval::HoldoutMask read_mask(const std::string& path);
void write_mask(const eval::HoldoutMask& mask, const std::string& path);

}  // namespace mlsbm::io
