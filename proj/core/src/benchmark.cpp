#include "mlsbm/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mlsbm/rng.hpp"

namespace mlsbm::bench {

namespace {

// Inverse-CDF sampling over arbitrary nonnegative weights; explicit so the
// draw sequence is pinned by our own code rather than a distribution object.
class WeightedPicker {
 public:
  explicit WeightedPicker(const std::vector<double>& weights) : cum_(weights) {
    double run = 0.0;
    for (double& c : cum_) {
      if (c < 0) throw UsageError("weights must be nonnegative");
      run += c;
      c = run;
    }
    if (!(run > 0)) throw UsageError("weights must not all be zero");
    total_ = run;
  }

  int operator()(std::mt19937_64& rng) const {
    const double x = std::uniform_real_distribution<double>(0.0, total_)(rng);
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), x);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cum_.begin(),
                                                     static_cast<std::ptrdiff_t>(cum_.size()) - 1));
  }

 private:
  std::vector<double> cum_;
  double total_ = 0.0;
};

void validate_spec(const BenchmarkSpec& s) {
  if (s.n_nodes < 2) throw UsageError("benchmark needs at least two nodes");
  if (s.n_layers < 1) throw UsageError("benchmark needs at least one layer");
  if (s.k_groups < 1 || s.k_groups > s.n_nodes) throw UsageError("k_groups must be in [1, n]");
  if (s.keep_prob < 0 || s.keep_prob > 1) throw UsageError("keep_prob must be in [0, 1]");
  if (s.mixing < 0 || s.mixing > 1) throw UsageError("mixing must be in [0, 1]");
  if (s.min_degree < 1 || s.max_degree < s.min_degree)
    throw UsageError("degree bounds must satisfy 1 <= min_degree <= max_degree");
}

}  // namespace

Matrix GroundTruth::aggregate_membership() const {
  if (partitions.empty()) throw UsageError("ground truth has no partitions");
  const int L = static_cast<int>(partitions.size());
  const int n = static_cast<int>(partitions[0].size());
  Matrix counts = Matrix::Zero(n, k_groups);
  for (const auto& part : partitions)
    for (int i = 0; i < n; ++i) counts(i, part[i]) += 1.0;
  return counts / static_cast<double>(L);
}

std::vector<std::vector<int>> correlated_partitions(int n_nodes, int n_layers, int k_groups,
                                                    double keep_prob, std::uint64_t seed) {
  if (n_nodes < 1 || n_layers < 1 || k_groups < 1)
    throw UsageError("partition dimensions must be positive");
  if (keep_prob < 0 || keep_prob > 1) throw UsageError("keep_prob must be in [0, 1]");
  auto rng = make_rng(seed);
  std::uniform_int_distribution<int> group(0, k_groups - 1);
  std::vector<std::vector<int>> parts(static_cast<std::size_t>(n_layers),
                                      std::vector<int>(static_cast<std::size_t>(n_nodes), 0));
  for (int i = 0; i < n_nodes; ++i) parts[0][i] = group(rng);
  std::bernoulli_distribution keep(keep_prob);
  for (int a = 1; a < n_layers; ++a)
    for (int i = 0; i < n_nodes; ++i)
      parts[a][i] = keep(rng) ? parts[a - 1][i] : group(rng);
  return parts;
}

std::vector<double> sample_degrees(const BenchmarkSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  std::vector<double> pmf;
  for (int d = spec.min_degree; d <= spec.max_degree; ++d)
    pmf.push_back(std::pow(static_cast<double>(d), spec.degree_exponent));
  WeightedPicker pick(pmf);
  auto rng = make_rng(seed);
  std::vector<double> deg(static_cast<std::size_t>(spec.n_nodes));
  for (double& d : deg) d = static_cast<double>(spec.min_degree + pick(rng));
  return deg;
}

std::vector<Edge> dcsbm_layer(const std::vector<int>& labels, const std::vector<double>& degrees,
                              int k_groups, double mixing, std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  if (degrees.size() != labels.size()) throw UsageError("labels and degrees must align");
  if (mixing < 0 || mixing > 1) throw UsageError("mixing must be in [0, 1]");
  auto rng = make_rng(seed);
  std::set<std::pair<int, int>> chosen;

  auto try_add = [&](int a, int b) {
    if (a == b) return;  // collisions are dropped, not redrawn
    if (a > b) std::swap(a, b);
    chosen.insert({a, b});
  };

  // Within-group edges: endpoints degree-proportional inside each group.
  double total_degree = 0.0;
  for (double d : degrees) total_degree += d;
  for (int gidx = 0; gidx < k_groups; ++gidx) {
    std::vector<int> members;
    std::vector<double> w;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      if (labels[i] == gidx) {
        members.push_back(i);
        w.push_back(degrees[i]);
        s += degrees[i];
      }
    if (members.size() < 2) continue;
    const long long m_within = std::llround((1.0 - mixing) * s / 2.0);
    WeightedPicker pick(w);
    for (long long e = 0; e < m_within; ++e) try_add(members[pick(rng)], members[pick(rng)]);
  }

  // Mixing edges: endpoints degree-proportional over the whole layer.
  const long long m_between = std::llround(mixing * total_degree / 2.0);
  if (m_between > 0) {
    WeightedPicker pick(degrees);
    for (long long e = 0; e < m_between; ++e) try_add(pick(rng), pick(rng));
  }

  std::vector<Edge> out;
  out.reserve(chosen.size());
  for (const auto& [a, b] : chosen) out.push_back(Edge{a, b, 1});
  return out;
}

BenchmarkSample generate_benchmark(const BenchmarkSpec& spec) {
  validate_spec(spec);
  GroundTruth truth;
  truth.k_groups = spec.k_groups;
  truth.partitions = correlated_partitions(spec.n_nodes, spec.n_layers, spec.k_groups,
                                           spec.keep_prob, derive_seed(spec.seed, 1));
  GraphBuilder builder(spec.n_nodes, spec.n_layers, /*directed=*/false,
                       /*allow_self_loops=*/false);
  for (int a = 0; a < spec.n_layers; ++a) {
    const auto deg = sample_degrees(spec, derive_seed(spec.seed, 1000 + a));
    const auto edges =
        dcsbm_layer(truth.partitions[a], deg, spec.k_groups, spec.mixing,
                    derive_seed(spec.seed, 2000 + a));
    for (const Edge& e : edges) builder.add_weight(a, e.i, e.j, e.weight);
  }
  return BenchmarkSample{builder.build(), std::move(truth)};
}

Matrix structure_affinity(LayerStructure s, double on, double off, double weak) {
  Matrix w(2, 2);
  switch (s) {
    case LayerStructure::Assortative: w << on, off, off, on; break;
    case LayerStructure::Disassortative: w << off, on, on, off; break;
    case LayerStructure::CorePeriphery: w << on, off, off, weak; break;
    case LayerStructure::DirectedBias: w << off, on, weak, off; break;
  }
  return w;
}

MixedStructureSpec g1_spec(std::uint64_t seed) {
  MixedStructureSpec s;
  s.layers = {LayerStructure::Assortative, LayerStructure::Disassortative};
  s.on = 0.04;
  s.off = 0.004;
  s.weak = 0.004;
  s.seed = seed;
  return s;
}

MixedStructureSpec g2_spec(std::uint64_t seed) {
  MixedStructureSpec s;
  s.layers = {LayerStructure::Assortative, LayerStructure::Disassortative,
              LayerStructure::CorePeriphery, LayerStructure::DirectedBias};
  s.on = 0.08;
  s.off = 0.008;
  s.weak = 0.004;
  s.seed = seed;
  return s;
}

MixedStructureSpec g3_spec(std::uint64_t seed) {
  MixedStructureSpec s;
  s.layers = {LayerStructure::Assortative, LayerStructure::Assortative,
              LayerStructure::Disassortative, LayerStructure::Disassortative};
  s.on = 0.04;
  s.off = 0.004;
  s.weak = 0.004;
  s.seed = seed;
  return s;
}

MixedSample generate_mixed_structure(const MixedStructureSpec& spec) {
  if (spec.n_nodes < 2) throw UsageError("mixed-structure suites need at least two nodes");
  if (spec.layers.empty()) throw UsageError("mixed-structure suites need at least one layer");
  if (spec.on < 0 || spec.off < 0 || spec.weak < 0)
    throw UsageError("affinity levels must be nonnegative");

  const int n = spec.n_nodes;
  const int half = n / 2;
  ModelParams p;
  p.mode = Mode::DirectedFull;
  p.u = Matrix::Zero(n, 2);
  for (int i = 0; i < n; ++i) p.u(i, i < half ? 0 : 1) = 1.0;
  p.v = p.u;
  for (LayerStructure s : spec.layers)
    p.w.push_back(structure_affinity(s, spec.on, spec.off, spec.weak));

  // Directed with self-loops: the expected edge count of each layer is then
  // exactly sum_ij M_ij over all ordered pairs.
  MultilayerGraph g = sample_network(p, derive_seed(spec.seed, 7), true);

  GroundTruth truth;
  truth.k_groups = 2;
  std::vector<int> labels(static_cast<std::size_t>(n), 1);
  for (int i = 0; i < half; ++i) labels[static_cast<std::size_t>(i)] = 0;
  truth.partitions.assign(spec.layers.size(), labels);
  return MixedSample{std::move(g), std::move(p), std::move(truth)};
}

}  // namespace mlsbm::bench
