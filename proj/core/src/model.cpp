#include "mlsbm/model.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "mlsbm/rng.hpp"

namespace mlsbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_shapes(const ModelParams& p) {
  if (p.u.rows() < 1 || p.u.cols() < 1) throw UsageError("membership matrices must be nonempty");
  if (p.v.rows() != p.u.rows() || p.v.cols() != p.u.cols())
    throw UsageError("u and v must have identical shapes");
  if (p.w.empty()) throw UsageError("at least one affinity matrix is required");
  for (const auto& w : p.w)
    if (w.rows() != p.u.cols() || w.cols() != p.u.cols())
      throw UsageError("affinity matrices must be K x K");
}

}  // namespace

void validate_params(const ModelParams& p) {
  check_shapes(p);
  if (p.u.minCoeff() < 0 || p.v.minCoeff() < 0)
    throw UsageError("memberships must be nonnegative");
  for (const auto& w : p.w)
    if (w.minCoeff() < 0) throw UsageError("affinities must be nonnegative");
  if (!mode_is_directed(p.mode)) {
    if (p.u != p.v) throw UsageError("undirected modes require v == u");
    for (const auto& w : p.w) {
      const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
      if (((w - w.transpose()).cwiseAbs().maxCoeff()) > 1e-9 * scale)
        throw UsageError("undirected modes require symmetric affinities");
    }
  }
  if (mode_is_diagonal(p.mode)) {
    for (const auto& w : p.w)
      for (int k = 0; k < w.rows(); ++k)
        for (int l = 0; l < w.cols(); ++l)
          if (k != l && w(k, l) != 0.0)
            throw UsageError("diagonal modes require zero off-diagonal affinities");
  }
}

double expected_edge(const ModelParams& p, int i, int j, int layer) {
  const Matrix& w = p.w[layer];
  const int K = static_cast<int>(p.u.cols());
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    double row = 0.0;
    for (int l = 0; l < K; ++l) row += w(k, l) * p.v(j, l);
    total += p.u(i, k) * row;
  }
  return total;
}

Matrix expected_layer(const ModelParams& p, int layer) {
  check_shapes(p);
  if (layer < 0 || layer >= p.n_layers()) throw UsageError("layer index out of range");
  const int n = p.n_nodes();
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = expected_edge(p, i, j, layer);
  return m;
}

std::vector<Matrix> expected_all_layers(const ModelParams& p) {
  std::vector<Matrix> out;
  out.reserve(p.w.size());
  for (int a = 0; a < p.n_layers(); ++a) out.push_back(expected_layer(p, a));
  return out;
}

double expected_total(const MultilayerGraph& g, const ModelParams& p, const LayerMask* mask) {
  check_shapes(p);
  if (p.n_nodes() != g.n_nodes() || p.n_layers() != g.n_layers())
    throw UsageError("parameter shapes do not match the graph");
  const int K = p.n_groups();
  const Vector su = p.u.colwise().sum();
  const Vector sv = p.v.colwise().sum();
  const Matrix cross = p.u.transpose() * p.v;  // cross(k,l) = sum_i u_ik v_il

  double total = 0.0;
  for (int a = 0; a < g.n_layers(); ++a) {
    const Matrix& w = p.w[a];
    double full = 0.0, diag = 0.0;
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < K; ++l) {
        full += su(k) * sv(l) * w(k, l);
        diag += cross(k, l) * w(k, l);
      }
    if (g.directed())
      total += g.allow_self_loops() ? full : full - diag;
    else
      total += (full - diag) / 2 + (g.allow_self_loops() ? diag : 0.0);
  }
  if (mask) {
    validate_mask(g, *mask);
    for (const Dyad& d : mask->dyads) total -= expected_edge(p, d.i, d.j, mask->layer);
  }
  return total;
}

double log_likelihood(const MultilayerGraph& g, const ModelParams& p, const LayerMask* mask) {
  double ll = 0.0;
  for (int a = 0; a < g.n_layers(); ++a) {
    for (const Edge& e : g.edges(a)) {
      if (mask && a == mask->layer && mask->contains(e.i, e.j)) continue;
      const double m = expected_edge(p, e.i, e.j, a);
      if (m <= 0.0) return kNegInf;
      ll += static_cast<double>(e.weight) * std::log(m);
    }
  }
  return ll - expected_total(g, p, mask);
}

MultilayerGraph sample_network(const ModelParams& p, std::uint64_t seed,
                               std::optional<bool> allow_self_loops) {
  validate_params(p);
  const bool directed = mode_is_directed(p.mode);
  const bool self = allow_self_loops.value_or(directed);
  GraphBuilder builder(p.n_nodes(), p.n_layers(), directed, self);
  auto rng = make_rng(seed);
  for (int a = 0; a < p.n_layers(); ++a) {
    const int n = p.n_nodes();
    for (int i = 0; i < n; ++i) {
      const int j0 = directed ? 0 : (self ? i : i + 1);
      for (int j = j0; j < n; ++j) {
        if (directed && i == j && !self) continue;
        const double m = expected_edge(p, i, j, a);
        if (m <= 0.0) continue;
        const long long cnt = std::poisson_distribution<long long>(m)(rng);
        if (cnt > 0) builder.add_weight(a, i, j, cnt);
      }
    }
  }
  return builder.build();
}

Matrix normalize_membership(const Matrix& m, std::vector<int>* isolated) {
  if (m.minCoeff() < 0) throw UsageError("membership entries must be nonnegative");
  if (isolated) isolated->clear();
  Matrix out = m;
  for (int i = 0; i < m.rows(); ++i) {
    const double s = m.row(i).sum();
    if (s > 0) {
      out.row(i) /= s;
    } else if (isolated) {
      isolated->push_back(i);
    }
  }
  return out;
}

std::vector<int> hard_assignment(const Matrix& membership) {
  std::vector<int> out(static_cast<std::size_t>(membership.rows()), 0);
  for (int i = 0; i < membership.rows(); ++i) {
    if (membership.row(i).sum() <= 0) {
      out[static_cast<std::size_t>(i)] = -1;
      continue;
    }
    int best = 0;
    for (int k = 1; k < membership.cols(); ++k)
      if (membership(i, k) > membership(i, best)) best = k;
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace mlsbm
