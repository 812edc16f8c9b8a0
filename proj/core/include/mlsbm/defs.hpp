#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace mlsbm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Inference modes. "full" fits a dense K x K affinity matrix per layer,
// "diagonal" restricts every affinity matrix to its diagonal (off-diagonal
// entries pinned at zero), which removes cross-group coupling.
enum class Mode {
  DirectedFull,
  UndirectedFull,
  DirectedDiagonal,
  UndirectedDiagonal,
};

inline bool mode_is_directed(Mode m) {
  return m == Mode::DirectedFull || m == Mode::DirectedDiagonal;
}

inline bool mode_is_diagonal(Mode m) {
  return m == Mode::DirectedDiagonal || m == Mode::UndirectedDiagonal;
}

std::string mode_name(Mode m);

// Parses one of "directed-full", "undirected-full", "directed-diagonal",
// "undirected-diagonal". Throws UsageError on anything else.
Mode mode_from_name(const std::string& name);

}  // namespace mlsbm
