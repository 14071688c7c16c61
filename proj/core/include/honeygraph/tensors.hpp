#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "honeygraph/graph.hpp"

namespace honeygraph {

/// Padded matrix form of one graph. Row i is the i-th node of the
/// topological order; adjacency(i, j) == 1 iff order[j] -> order[i].
struct GraphTensors {
  std::size_t n = 0;       // real nodes
  std::size_t n_pad = 0;   // matrix extent
  Eigen::VectorXi types;   // node-type index per row, 0 on padding
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd adjacency_t;
  Eigen::VectorXd mask;    // 1 real, 0 padding
  std::vector<std::string> order;

  /// Predecessor row indices of real row i (columns with adjacency 1).
  std::vector<std::size_t> predecessors(std::size_t i) const;
};

GraphTensors to_matrices(const ADGraph& graph, std::size_t n_pad);

/// Inverse of to_matrices on the real rows: node types and adjacency are read
/// back and node ids are taken from `order`.
ADGraph from_matrices(const GraphTensors& tensors);

}  // namespace honeygraph
