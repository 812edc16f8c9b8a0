#include "mlsbm/interdependence.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mlsbm/rng.hpp"

namespace mlsbm::interdep {

namespace {

StepRecord record_step(const eval::CvResult& cv, std::vector<int> layer_set, int changed) {
  StepRecord rec;
  rec.layer_set = std::move(layer_set);
  rec.mean_auc = cv.mean_auc;
  rec.std_auc = cv.std_auc;
  rec.fold_aucs = cv.fold_aucs;
  rec.changed_layer = changed;
  return rec;
}

}  // namespace

std::pair<double, double> single_layer_auc(const MultilayerGraph& g, int target_layer,
                                           const em::EmConfig& cfg, std::uint64_t seed) {
  const eval::CvResult cv =
      eval::cross_validated_auc(g, target_layer, {target_layer}, cfg, seed);
  return {cv.mean_auc, cv.std_auc};
}

InterdepReport greedy_layer_selection(const MultilayerGraph& g, int target_layer, int max_layers,
                                      const em::EmConfig& cfg, std::uint64_t seed) {
  if (target_layer < 0 || target_layer >= g.n_layers())
    throw UsageError("target layer out of range");
  if (max_layers < 1 || max_layers > g.n_layers())
    throw UsageError("max_layers must be in [1, n_layers]");

  // One mask for the whole procedure keeps every step's AUC comparable.
  const eval::HoldoutMask mask = eval::make_folds(g, target_layer, derive_seed(seed, 17));

  InterdepReport rep;
  rep.target_layer = target_layer;
  rep.bottom_up = true;

  std::vector<int> current{target_layer};
  rep.trajectory.push_back(
      record_step(eval::cv_auc_with_mask(g, mask, current, cfg, seed), current, -1));

  while (static_cast<int>(current.size()) < max_layers) {
    int best_layer = -1;
    double best_mean = -std::numeric_limits<double>::infinity();
    eval::CvResult best_cv;
    std::vector<std::pair<int, double>> candidates;
    for (int c = 0; c < g.n_layers(); ++c) {
      if (std::find(current.begin(), current.end(), c) != current.end()) continue;
      std::vector<int> trial = current;
      trial.push_back(c);
      std::sort(trial.begin(), trial.end());
      eval::CvResult cv = eval::cv_auc_with_mask(g, mask, trial, cfg, seed);
      candidates.push_back({c, cv.mean_auc});
      if (cv.mean_auc > best_mean) {  // ties keep the lowest layer index
        best_mean = cv.mean_auc;
        best_layer = c;
        best_cv = std::move(cv);
      }
    }
    current.push_back(best_layer);
    std::sort(current.begin(), current.end());
    StepRecord rec = record_step(best_cv, current, best_layer);
    rec.candidates = std::move(candidates);
    rep.trajectory.push_back(std::move(rec));
    rep.selection_order.push_back(best_layer);
  }
  return rep;
}

InterdepReport top_down_removal(const MultilayerGraph& g, int target_layer, int min_layers,
                                const em::EmConfig& cfg, std::uint64_t seed) {
  if (target_layer < 0 || target_layer >= g.n_layers())
    throw UsageError("target layer out of range");
  if (min_layers < 1 || min_layers > g.n_layers())
    throw UsageError("min_layers must be in [1, n_layers]");

  const eval::HoldoutMask mask = eval::make_folds(g, target_layer, derive_seed(seed, 17));

  InterdepReport rep;
  rep.target_layer = target_layer;
  rep.bottom_up = false;

  std::vector<int> current(static_cast<std::size_t>(g.n_layers()));
  std::iota(current.begin(), current.end(), 0);
  rep.trajectory.push_back(
      record_step(eval::cv_auc_with_mask(g, mask, current, cfg, seed), current, -1));

  while (static_cast<int>(current.size()) > min_layers) {
    int best_layer = -1;
    double best_mean = -std::numeric_limits<double>::infinity();
    eval::CvResult best_cv;
    std::vector<std::pair<int, double>> candidates;
    for (int c : current) {
      if (c == target_layer) continue;  // the target itself is never removed
      std::vector<int> trial;
      for (int a : current)
        if (a != c) trial.push_back(a);
      eval::CvResult cv = eval::cv_auc_with_mask(g, mask, trial, cfg, seed);
      candidates.push_back({c, cv.mean_auc});
      if (cv.mean_auc > best_mean) {  // removing this layer hurts least
        best_mean = cv.mean_auc;
        best_layer = c;
        best_cv = std::move(cv);
      }
    }
    if (best_layer < 0) break;  // only the target is left
    current.erase(std::remove(current.begin(), current.end(), best_layer), current.end());
    StepRecord rec = record_step(best_cv, current, best_layer);
    rec.candidates = std::move(candidates);
    rep.trajectory.push_back(std::move(rec));
    rep.selection_order.push_back(best_layer);
  }
  return rep;
}

std::vector<int> kmeans(const Matrix& points, int n_clusters, int restarts, std::uint64_t seed,
                        double* inertia_out) {
  const int n = static_cast<int>(points.rows());
  if (n < 1) throw UsageError("k-means needs at least one point");
  if (n_clusters < 1 || n_clusters > n) throw UsageError("n_clusters must be in [1, n_points]");
  if (restarts < 1) throw UsageError("k-means needs at least one restart");

  const int first_offset = static_cast<int>(derive_seed(seed, 5) % static_cast<std::uint64_t>(n));
  std::vector<int> best_labels;
  double best_inertia = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    // Farthest-point seeding, rotating the initial center across restarts.
    std::vector<int> seeds{(first_offset + r) % n};
    while (static_cast<int>(seeds.size()) < n_clusters) {
      int pick = -1;
      double pick_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (std::find(seeds.begin(), seeds.end(), i) != seeds.end()) continue;
        double d = std::numeric_limits<double>::infinity();
        for (int s : seeds) d = std::min(d, (points.row(i) - points.row(s)).squaredNorm());
        if (d > pick_d) {
          pick_d = d;
          pick = i;
        }
      }
      seeds.push_back(pick);
    }
    Matrix centers(n_clusters, points.cols());
    for (int c = 0; c < n_clusters; ++c) centers.row(c) = points.row(seeds[c]);

    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (int sweep = 0; sweep < 200; ++sweep) {
      bool changed = false;
      for (int i = 0; i < n; ++i) {
        int arg = 0;
        double dmin = (points.row(i) - centers.row(0)).squaredNorm();
        for (int c = 1; c < n_clusters; ++c) {
          const double d = (points.row(i) - centers.row(c)).squaredNorm();
          if (d < dmin) {
            dmin = d;
            arg = c;
          }
        }
        if (labels[i] != arg) {
          labels[i] = arg;
          changed = true;
        }
      }
      if (!changed && sweep > 0) break;

      std::vector<int> count(static_cast<std::size_t>(n_clusters), 0);
      Matrix sum = Matrix::Zero(n_clusters, points.cols());
      for (int i = 0; i < n; ++i) {
        sum.row(labels[i]) += points.row(i);
        ++count[labels[i]];
      }
      for (int c = 0; c < n_clusters; ++c) {
        if (count[c] > 0) {
          centers.row(c) = sum.row(c) / count[c];
        } else {
          // Re-seed an empty cluster with the point farthest from its center.
          int far = 0;
          double fd = -1.0;
          for (int i = 0; i < n; ++i) {
            const double d = (points.row(i) - centers.row(labels[i])).squaredNorm();
            if (d > fd) {
              fd = d;
              far = i;
            }
          }
          centers.row(c) = points.row(far);
          labels[far] = c;
        }
      }
    }

    double inertia = 0.0;
    for (int i = 0; i < n; ++i) inertia += (points.row(i) - centers.row(labels[i])).squaredNorm();
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best_labels = labels;
    }
  }

  // Canonical labels: clusters numbered by first appearance.
  std::vector<int> remap(static_cast<std::size_t>(n_clusters), -1);
  int next = 0;
  for (int& l : best_labels) {
    if (remap[l] < 0) remap[l] = next++;
    l = remap[l];
  }
  if (inertia_out) *inertia_out = best_inertia;
  return best_labels;
}

Matrix pca_2d(const Matrix& points) {
  const int n = static_cast<int>(points.rows());
  if (n < 1) throw UsageError("PCA needs at least one point");
  Matrix x = points.rowwise() - points.colwise().mean();
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int c = std::min<int>(2, static_cast<int>(svd.singularValues().size()));
  Matrix out = Matrix::Zero(n, 2);
  for (int comp = 0; comp < c; ++comp) {
    Vector col = svd.matrixU().col(comp) * svd.singularValues()(comp);
    // Deterministic sign: the largest-magnitude loading is positive.
    int arg = 0;
    for (int d = 1; d < svd.matrixV().rows(); ++d)
      if (std::abs(svd.matrixV()(d, comp)) > std::abs(svd.matrixV()(arg, comp))) arg = d;
    if (svd.matrixV()(arg, comp) < 0) col = -col;
    out.col(comp) = col;
  }
  return out;
}

AffinityEmbedding cluster_affinity_matrices(const std::vector<Matrix>& w, int n_clusters,
                                            std::uint64_t seed) {
  const int L = static_cast<int>(w.size());
  if (L < 1) throw UsageError("clustering needs at least one layer");
  if (n_clusters < 1 || n_clusters > L) throw UsageError("n_clusters must be in [1, n_layers]");
  const int K = static_cast<int>(w[0].rows());
  for (const Matrix& m : w)
    if (m.rows() != K || m.cols() != K) throw UsageError("affinity matrices must all be K x K");

  AffinityEmbedding emb;
  emb.points.resize(L, K * K);
  for (int a = 0; a < L; ++a)
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < K; ++l) emb.points(a, k * K + l) = w[a](k, l);

  emb.cluster = kmeans(emb.points, n_clusters, 10, seed, &emb.inertia);
  emb.pca = pca_2d(emb.points);
  return emb;
}

AffinityEmbedding cluster_affinity_matrices(const ModelParams& p, int n_clusters,
                                            std::uint64_t seed) {
  return cluster_affinity_matrices(p.w, n_clusters, seed);
}

}  // namespace mlsbm::interdep
