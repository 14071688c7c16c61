#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "honeygraph/graph.hpp"
#include "honeygraph/model.hpp"
#include "honeygraph/random.hpp"

namespace honeygraph {

struct ExtensionResult {
  ADGraph graph;                       // original plus kept honeyusers
  std::vector<std::string> new_nodes;  // ids of kept nodes
  std::vector<std::size_t> discarded;  // sampled rows with no edge above threshold
  Eigen::MatrixXd scores;              // (k, n), columns in topological order
  std::vector<std::string> column_order;
};

/// Samples k latent rows, scores them against every node of `graph` and keeps
/// the rows that connect. Kept nodes are typed User.
ExtensionResult extend_graph(const ModelParams& params, const ModelConfig& config,
                             const ADGraph& graph, std::size_t k, Rng& rng);

}  // namespace honeygraph
