#pragma once

#include <cstdint>
#include <vector>

#include "mlsbm/em.hpp"
#include "mlsbm/graph.hpp"
#include "mlsbm/model.hpp"

namespace mlsbm::eval {

// Mean cosine similarity between matching rows of two N x K matrices. Rows
// where either side has zero norm are excluded from the mean.
double cosine_similarity(const Matrix& truth, const Matrix& candidate);

// (1 / 2N) * sum of absolute entry differences; all N rows count.
double l1_error(const Matrix& truth, const Matrix& candidate);

enum class MatchMetric { Cosine, L1 };

struct MatchResult {
  double score = 0.0;
  // perm[k] = column of the candidate aligned with truth column k.
  std::vector<int> perm;
};

// Exhaustive search over all K! column permutations of the candidate,
// maximizing cosine similarity or minimizing L1 error. Ties resolve to the
// lexicographically smallest permutation. K <= 10 (CapabilityError beyond).
MatchResult best_permutation_match(const Matrix& truth, const Matrix& candidate,
                                   MatchMetric metric);

// One shared permutation for a directed pair of memberships, optimizing the
// summed metric; score is the mean of the two aligned metrics.
MatchResult best_permutation_match_joint(const Matrix& truth_u, const Matrix& truth_v,
                                         const Matrix& cand_u, const Matrix& cand_v,
                                         MatchMetric metric);

struct ScoredDyad {
  int i = 0;
  int j = 0;
  double score = 0.0;
  bool is_link = false;
};

struct PredictionScores {
  int target_layer = 0;
  int fold = -1;  // -1 when scoring the whole dataset
  std::vector<ScoredDyad> entries;
};

// Mann-Whitney AUC with ties counted half. Computed from integer pair counts,
// so it equals the brute-force pairwise count exactly. Throws
// UndefinedMetricError when either class is empty.
double auc(const PredictionScores& scores);

// 5-fold partition of the target layer's dyad universe (links and non-links
// alike). Fold sizes differ by at most one.
struct HoldoutMask {
  int target_layer = 0;
  int n_folds = 5;
  std::vector<Dyad> dyads;   // shuffled universe, canonical orientation
  std::vector<int> fold_of;  // parallel to dyads
  LayerMask fold_mask(int fold) const;
};

HoldoutMask make_folds(const MultilayerGraph& g, int target_layer, std::uint64_t seed);

// Fits on training_layers with one fold of the target layer masked, then
// scores exactly the held-out dyads. training_layers must contain the target.
PredictionScores masked_fit_predict(const MultilayerGraph& g, const HoldoutMask& mask, int fold,
                                    const std::vector<int>& training_layers,
                                    const em::EmConfig& cfg, em::FitResult* fit_out = nullptr);

struct CvResult {
  double mean_auc = 0.0;
  double std_auc = 0.0;  // sample standard deviation over folds
  std::vector<double> fold_aucs;
  std::vector<PredictionScores> fold_scores;
};

// Cross-validation against a pre-built mask; fold f uses the derived EM seed
// splitmix(seed, 101 + f), so results do not depend on evaluation order.
CvResult cv_auc_with_mask(const MultilayerGraph& g, const HoldoutMask& mask,
                          const std::vector<int>& training_layers, const em::EmConfig& cfg,
                          std::uint64_t seed);

// make_folds (fold seed splitmix(seed, 17)) followed by cv_auc_with_mask.
CvResult cross_validated_auc(const MultilayerGraph& g, int target_layer,
                             const std::vector<int>& training_layers, const em::EmConfig& cfg,
                             std::uint64_t seed);

// AUC of the fitted expected-edge scores over every dyad of every layer,
// without any holdout.
double whole_dataset_auc(const MultilayerGraph& g, const ModelParams& p);

}  // namespace mlsbm::eval
