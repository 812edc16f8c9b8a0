#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mlsbm/evaluation.hpp"
#include "mlsbm/model.hpp"

namespace mlsbm::interdep {

struct StepRecord {
  std::vector<int> layer_set;  // sorted training set after this step
  double mean_auc = 0.0;
  double std_auc = 0.0;
  std::vector<double> fold_aucs;
  int changed_layer = -1;  // layer added/removed by this step, -1 for the start
  // Mean AUC of every candidate evaluated at this step (layer, mean).
  std::vector<std::pair<int, double>> candidates;
};

struct InterdepReport {
  int target_layer = 0;
  bool bottom_up = true;
  std::vector<StepRecord> trajectory;
  // Layers added (greedy) or removed (top-down), in order; excludes the start.
  std::vector<int> selection_order;
};

// Cross-validated AUC of the target layer given only itself as training data:
// the leftmost point of every trajectory. Returns (mean, std over folds).
std::pair<double, double> single_layer_auc(const MultilayerGraph& g, int target_layer,
                                           const em::EmConfig& cfg, std::uint64_t seed);

// Greedy forward selection of layers for predicting target_layer. Starts from
// {target_layer}, at each step adds the candidate with the highest mean AUC
// (ties to the lowest layer index), and keeps going until max_layers even if
// the AUC drops. One 5-fold mask (derived from seed) is shared by the whole
// procedure so scores stay comparable across steps.
InterdepReport greedy_layer_selection(const MultilayerGraph& g, int target_layer, int max_layers,
                                      const em::EmConfig& cfg, std::uint64_t seed);

// Mirror image: starts from all layers and repeatedly removes the layer
// (never the target) whose removal hurts the mean AUC least, down to
// min_layers. Shares one mask the same way.
InterdepReport top_down_removal(const MultilayerGraph& g, int target_layer, int min_layers,
                                const em::EmConfig& cfg, std::uint64_t seed);

struct AffinityEmbedding {
  Matrix points;              // L x K^2, row-major flattening of each layer's w
  std::vector<int> cluster;   // labels in [0, n_clusters), relabeled by first use
  Matrix pca;                 // L x 2 principal-plane coordinates
  double inertia = 0.0;       // within-cluster sum of squared distances
};

// k-means (Lloyd) with `restarts` runs and farthest-point seeding; run r
// starts from point (offset + r) mod L with a seed-derived offset. Ties in
// assignment and seeding resolve to the lowest index; the run with the lowest
// inertia wins. Returned labels are renumbered in order of first appearance.
std::vector<int> kmeans(const Matrix& points, int n_clusters, int restarts, std::uint64_t seed,
                        double* inertia_out = nullptr);

// Rank-2 PCA scores of the rows (mean-centered, SVD-based). Component signs
// are fixed by making each one's largest-magnitude loading positive.
Matrix pca_2d(const Matrix& points);

// Flattens the fitted affinity matrices to K^2-vectors, clusters them with
// 10 k-means restarts, and attaches the PCA plane for plotting.
AffinityEmbedding cluster_affinity_matrices(const std::vector<Matrix>& w, int n_clusters,
                                            std::uint64_t seed);
AffinityEmbedding cluster_affinity_matrices(const ModelParams& p, int n_clusters,
                                            std::uint64_t seed);

}  // namespace mlsbm::interdep
