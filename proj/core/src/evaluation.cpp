#include "mlsbm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mlsbm/errors.hpp"
#include "mlsbm/rng.hpp"

namespace mlsbm::eval {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw UsageError("membership matrices must have identical shapes");
}

constexpr int kMaxPermutationGroups = 10;

void check_perm_limit(int k) {
  if (k > kMaxPermutationGroups)
    throw CapabilityError("exhaustive permutation matching is limited to K <= 10 groups");
}

// Column-pair cost tables: both metrics decompose into sums over matched
// column pairs, so a K x K table makes each permutation O(K) to score.
// cosine(a, b) = sum over valid rows of a_col . b_col / (|a_i| |b_i|).
Matrix cosine_table(const Matrix& truth, const Matrix& cand, int* valid_rows) {
  const int K = static_cast<int>(truth.cols());
  Matrix t = Matrix::Zero(K, K);
  int cnt = 0;
  for (int i = 0; i < truth.rows(); ++i) {
    const double na = truth.row(i).norm();
    const double nb = cand.row(i).norm();
    if (na <= 0 || nb <= 0) continue;
    ++cnt;
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) t(a, b) += truth(i, a) * cand(i, b) / (na * nb);
  }
  *valid_rows = cnt;
  return t;
}

Matrix l1_table(const Matrix& truth, const Matrix& cand) {
  const int K = static_cast<int>(truth.cols());
  Matrix t = Matrix::Zero(K, K);
  for (int i = 0; i < truth.rows(); ++i)
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) t(a, b) += std::abs(truth(i, a) - cand(i, b));
  return t;
}

double perm_score(const Matrix& table, const std::vector<int>& perm) {
  double s = 0.0;
  for (int k = 0; k < static_cast<int>(perm.size()); ++k) s += table(k, perm[k]);
  return s;
}

}  // namespace

double cosine_similarity(const Matrix& truth, const Matrix& candidate) {
  check_same_shape(truth, candidate);
  double acc = 0.0;
  int cnt = 0;
  for (int i = 0; i < truth.rows(); ++i) {
    const double na = truth.row(i).norm();
    const double nb = candidate.row(i).norm();
    if (na <= 0 || nb <= 0) continue;
    acc += truth.row(i).dot(candidate.row(i)) / (na * nb);
    ++cnt;
  }
  if (cnt == 0) throw UndefinedMetricError("cosine similarity needs a row with positive norm");
  return acc / cnt;
}

double l1_error(const Matrix& truth, const Matrix& candidate) {
  check_same_shape(truth, candidate);
  return (truth - candidate).cwiseAbs().sum() / (2.0 * static_cast<double>(truth.rows()));
}

MatchResult best_permutation_match(const Matrix& truth, const Matrix& candidate,
                                   MatchMetric metric) {
  check_same_shape(truth, candidate);
  const int K = static_cast<int>(truth.cols());
  check_perm_limit(K);

  int valid = 0;
  const bool cos = metric == MatchMetric::Cosine;
  const Matrix table = cos ? cosine_table(truth, candidate, &valid) : l1_table(truth, candidate);
  if (cos && valid == 0)
    throw UndefinedMetricError("cosine similarity needs a row with positive norm");
  const double denom =
      cos ? static_cast<double>(valid) : 2.0 * static_cast<double>(truth.rows());

  std::vector<int> perm(static_cast<std::size_t>(K));
  std::iota(perm.begin(), perm.end(), 0);
  MatchResult best;
  bool have = false;
  do {
    const double s = perm_score(table, perm) / denom;
    if (!have || (cos ? s > best.score : s < best.score)) {
      have = true;
      best.score = s;
      best.perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

MatchResult best_permutation_match_joint(const Matrix& truth_u, const Matrix& truth_v,
                                         const Matrix& cand_u, const Matrix& cand_v,
                                         MatchMetric metric) {
  check_same_shape(truth_u, cand_u);
  check_same_shape(truth_v, cand_v);
  if (truth_u.cols() != truth_v.cols())
    throw UsageError("joint matching needs the same group count on both sides");
  const int K = static_cast<int>(truth_u.cols());
  check_perm_limit(K);

  const bool cos = metric == MatchMetric::Cosine;
  int valid_u = 0, valid_v = 0;
  Matrix tu, tv;
  double den_u, den_v;
  if (cos) {
    tu = cosine_table(truth_u, cand_u, &valid_u);
    tv = cosine_table(truth_v, cand_v, &valid_v);
    if (valid_u == 0 || valid_v == 0)
      throw UndefinedMetricError("cosine similarity needs a row with positive norm");
    den_u = valid_u;
    den_v = valid_v;
  } else {
    tu = l1_table(truth_u, cand_u);
    tv = l1_table(truth_v, cand_v);
    den_u = 2.0 * static_cast<double>(truth_u.rows());
    den_v = 2.0 * static_cast<double>(truth_v.rows());
  }

  std::vector<int> perm(static_cast<std::size_t>(K));
  std::iota(perm.begin(), perm.end(), 0);
  MatchResult best;
  bool have = false;
  do {
    const double s = (perm_score(tu, perm) / den_u + perm_score(tv, perm) / den_v) / 2.0;
    if (!have || (cos ? s > best.score : s < best.score)) {
      have = true;
      best.score = s;
      best.perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double auc(const PredictionScores& scores) {
  std::vector<std::pair<double, bool>> v;
  v.reserve(scores.entries.size());
  long long pos = 0, neg = 0;
  for (const ScoredDyad& d : scores.entries) {
    v.push_back({d.score, d.is_link});
    (d.is_link ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0)
    throw UndefinedMetricError("AUC needs at least one link and one non-link");
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Twice the Mann-Whitney count: each (link, non-link) pair contributes 2 if
  // the link scores higher, 1 on a tie. Integer arithmetic keeps it exact.
  long long correct2 = 0;
  long long neg_below = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    long long bp = 0, bn = 0;
    while (j < v.size() && v[j].first == v[i].first) {
      (v[j].second ? bp : bn) += 1;
      ++j;
    }
    correct2 += bp * (2 * neg_below + bn);
    neg_below += bn;
    i = j;
  }
  return static_cast<double>(correct2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

LayerMask HoldoutMask::fold_mask(int fold) const {
  if (fold < 0 || fold >= n_folds) throw UsageError("fold index out of range");
  LayerMask m;
  m.layer = target_layer;
  for (std::size_t d = 0; d < dyads.size(); ++d)
    if (fold_of[d] == fold) m.dyads.push_back(dyads[d]);
  std::sort(m.dyads.begin(), m.dyads.end());
  return m;
}

HoldoutMask make_folds(const MultilayerGraph& g, int target_layer, std::uint64_t seed) {
  if (target_layer < 0 || target_layer >= g.n_layers())
    throw UsageError("target layer out of range");
  HoldoutMask mask;
  mask.target_layer = target_layer;
  mask.n_folds = 5;
  for_each_dyad(g, [&](int i, int j) { mask.dyads.push_back(Dyad{i, j}); });
  if (mask.dyads.size() < static_cast<std::size_t>(mask.n_folds))
    throw UsageError("the dyad universe is smaller than the fold count");

  auto rng = make_rng(seed);
  std::shuffle(mask.dyads.begin(), mask.dyads.end(), rng);

  // Contiguous blocks of the shuffled order; sizes differ by at most one.
  const std::size_t n = mask.dyads.size();
  const std::size_t base = n / static_cast<std::size_t>(mask.n_folds);
  const std::size_t extra = n % static_cast<std::size_t>(mask.n_folds);
  mask.fold_of.resize(n);
  std::size_t at = 0;
  for (int f = 0; f < mask.n_folds; ++f) {
    const std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    for (std::size_t t = 0; t < len; ++t) mask.fold_of[at++] = f;
  }
  return mask;
}

PredictionScores masked_fit_predict(const MultilayerGraph& g, const HoldoutMask& mask, int fold,
                                    const std::vector<int>& training_layers,
                                    const em::EmConfig& cfg, em::FitResult* fit_out) {
  std::vector<int> layers = training_layers;
  std::sort(layers.begin(), layers.end());
  const auto pos = std::find(layers.begin(), layers.end(), mask.target_layer);
  if (pos == layers.end())
    throw UsageError("training layers must include the target layer");
  const int target_idx = static_cast<int>(pos - layers.begin());

  LayerMask lm = mask.fold_mask(fold);
  const MultilayerGraph sub = g.restricted_to_layers(layers);
  lm.layer = target_idx;

  em::FitResult fit = em::run_em_masked(sub, cfg, lm);

  PredictionScores out;
  out.target_layer = mask.target_layer;
  out.fold = fold;
  out.entries.reserve(lm.dyads.size());
  for (const Dyad& d : lm.dyads) {
    ScoredDyad s;
    s.i = d.i;
    s.j = d.j;
    s.score = expected_edge(fit.params, d.i, d.j, target_idx);
    s.is_link = g.weight(d.i, d.j, mask.target_layer) >= 1;
    out.entries.push_back(s);
  }
  if (fit_out) *fit_out = std::move(fit);
  return out;
}

CvResult cv_auc_with_mask(const MultilayerGraph& g, const HoldoutMask& mask,
                          const std::vector<int>& training_layers, const em::EmConfig& cfg,
                          std::uint64_t seed) {
  CvResult res;
  for (int f = 0; f < mask.n_folds; ++f) {
    em::EmConfig fold_cfg = cfg;
    fold_cfg.seed = derive_seed(seed, 101 + static_cast<std::uint64_t>(f));
    PredictionScores sc = masked_fit_predict(g, mask, f, training_layers, fold_cfg);
    res.fold_aucs.push_back(auc(sc));
    res.fold_scores.push_back(std::move(sc));
  }
  const double n = static_cast<double>(res.fold_aucs.size());
  res.mean_auc = std::accumulate(res.fold_aucs.begin(), res.fold_aucs.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : res.fold_aucs) ss += (a - res.mean_auc) * (a - res.mean_auc);
  res.std_auc = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  return res;
}

CvResult cross_validated_auc(const MultilayerGraph& g, int target_layer,
                             const std::vector<int>& training_layers, const em::EmConfig& cfg,
                             std::uint64_t seed) {
  const HoldoutMask mask = make_folds(g, target_layer, derive_seed(seed, 17));
  return cv_auc_with_mask(g, mask, training_layers, cfg, seed);
}

double whole_dataset_auc(const MultilayerGraph& g, const ModelParams& p) {
  if (p.n_nodes() != g.n_nodes() || p.n_layers() != g.n_layers())
    throw UsageError("parameter shapes do not match the graph");
  PredictionScores sc;
  sc.fold = -1;
  std::vector<ScoredDyad>& entries = sc.entries;
  for (int a = 0; a < g.n_layers(); ++a) {
    for_each_dyad(g, [&](int i, int j) {
      ScoredDyad d;
      d.i = i;
      d.j = j;
      d.score = expected_edge(p, i, j, a);
      d.is_link = g.weight(i, j, a) >= 1;
      entries.push_back(d);
    });
  }
  return auc(sc);
}

}  // namespace mlsbm::eval
