#include "honeygraph/extend.hpp"

#include <cmath>

#include "honeygraph/dagrnn.hpp"
#include "honeygraph/error.hpp"
#include "honeygraph/tensors.hpp"

namespace honeygraph {

ExtensionResult extend_graph(const ModelParams& params, const ModelConfig& config,
                             const ADGraph& graph, std::size_t k, Rng& rng) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "extend_graph: k must be at least 1");
  const GraphTensors tensors = to_matrices(graph, graph.node_count());
  const EncodeResult enc = encode_mean(tensors, params);
  const auto n = static_cast<Eigen::Index>(tensors.n);
  const auto latent = static_cast<Eigen::Index>(config.latent_dim);
  const auto rows = static_cast<Eigen::Index>(k);

  Eigen::MatrixXd z = standard_normal(rows, latent, rng);
  if (config.sampling == LatentSampling::AggregatedPosterior) {
    const Eigen::RowVectorXd mean = enc.mu.topRows(n).colwise().mean();
    const Eigen::RowVectorXd var = enc.sigma.topRows(n).array().square().matrix().colwise().mean();
    const Eigen::RowVectorXd sd = var.array().sqrt().matrix();
    for (Eigen::Index i = 0; i < rows; ++i) {
      z.row(i) = mean + z.row(i).cwiseProduct(sd);
    }
  }

  Eigen::MatrixXd scores = decode(z, enc.h.topRows(n), params);
  ExtensionOutcome outcome = from_extension(
      graph, std::vector<NodeType>(k, NodeType::User), scores, config.edge_threshold);
  return ExtensionResult{std::move(outcome.graph), std::move(outcome.added_ids),
                         std::move(outcome.discarded), std::move(scores), tensors.order};
}

}  // namespace honeygraph
