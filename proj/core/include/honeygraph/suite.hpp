#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "honeygraph/evaluation.hpp"
#include "honeygraph/graph.hpp"
#include "honeygraph/model.hpp"

namespace honeygraph {

/// Held-out reconstruction quality with z = mu and the configured threshold.
struct ReconstructionReport {
  std::size_t graphs = 0;
  ConfusionCounts counts;       // pooled over every graph
  PrecisionRecall pooled;
  double f1_per_graph_mean = 0.0;
  double pr_auc = 0.0;          // pooled entries
  std::vector<PrPoint> curve;   // filled on request
};

ReconstructionReport evaluate_reconstruction(const std::vector<ADGraph>& graphs,
                                             const ModelParams& params,
                                             const ModelConfig& config, bool want_curve = false);

/// Averages over graphs that kept at least one new node. MECR is left empty
/// when no graph has User nodes (grids, for instance).
struct ExtensionReport {
  std::size_t graphs = 0;
  std::size_t graphs_without_new_nodes = 0;
  std::size_t nodes_requested = 0;
  std::size_t nodes_kept = 0;
  double evr = 0.0;
  std::optional<double> mecr;
  double delta_in_original = 0.0;   // mean over graphs with Users
  double delta_in_generated = 0.0;  // mean over graphs that kept nodes
  double wasserstein_new = 0.0;     // original degrees vs new-node degrees
  double wasserstein_all = 0.0;     // original degrees vs extended degrees
};

/// Extends every graph with k sampled nodes; graph g draws from
/// make_rng(seed, {g}).
ExtensionReport evaluate_extension(const std::vector<ADGraph>& graphs, const ModelParams& params,
                                   const ModelConfig& config, std::size_t k, std::uint64_t seed);

/// Metrics for an explicit original/extended pair. New nodes are the ids of
/// `extended` missing from `original`; metrics that need them stay empty when
/// there are none.
struct PairReport {
  std::vector<std::string> new_nodes;
  std::optional<double> evr;
  std::optional<double> mecr;
  std::optional<double> wasserstein_new;
  double wasserstein_all = 0.0;
};

PairReport compare_graphs(const ADGraph& original, const ADGraph& extended);

}  // namespace honeygraph
