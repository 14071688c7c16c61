#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "honeygraph/graph.hpp"

namespace honeygraph {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

/// Element-wise comparison over masked strictly-lower-triangular entries.
ConfusionCounts confusion(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& predicted,
                          const Eigen::VectorXd& mask);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// 0/0 is reported as 0.
PrecisionRecall prf1(const ConfusionCounts& counts);

struct PrPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

/// Flattened scored entries, for pooling over many graphs.
struct ScoredEntries {
  std::vector<double> scores;
  std::vector<int> labels;

  void append(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& scores_matrix,
              const Eigen::VectorXd& mask);
};

/// Curve anchored at (recall 0, precision 1), one point per distinct score
/// (descending threshold).
std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area under pr_curve over recall. 0 when there are no positives.
double pr_auc(std::span<const double> scores, std::span<const int> labels);
double pr_auc(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& scores,
              const Eigen::VectorXd& mask);

struct EdgeValidity {
  double evr = 0.0;
  std::vector<double> per_node;
};

/// Mean over new nodes of valid incoming edges / incoming edges.
EdgeValidity edge_validity_ratio(const ADGraph& extended, const std::vector<std::string>& new_nodes);

struct ExtensionMetrics {
  double evr = 0.0;
  double mecr = 0.0;
  std::vector<double> per_node_evr;
  double delta_in_original = 0.0;
  double delta_in_generated = 0.0;
};

/// min/max of the mean in-degree over original Users and over new nodes.
double edge_count_ratio(double delta_in_original, double delta_in_generated) noexcept;

ExtensionMetrics extension_metrics(const ADGraph& original, const ADGraph& extended,
                                   const std::vector<std::string>& new_nodes);

double mean_edge_count_ratio(const ADGraph& original, const ADGraph& extended,
                             const std::vector<std::string>& new_nodes);

/// First Wasserstein distance between two empirical distributions.
double wasserstein_1d(std::vector<double> a, std::vector<double> b);

/// Total degree (in + out) of every node, or of the listed nodes.
std::vector<double> degree_sample(const ADGraph& graph);
std::vector<double> degree_sample(const ADGraph& graph, const std::vector<std::string>& ids);

inline double degree_wasserstein(const std::vector<double>& a, const std::vector<double>& b) {
  return wasserstein_1d(a, b);
}

}  // namespace honeygraph
