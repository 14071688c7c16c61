#include "honeygraph/suite.hpp"

#include "honeygraph/dagrnn.hpp"
#include "honeygraph/error.hpp"
#include "honeygraph/extend.hpp"
#include "honeygraph/random.hpp"
#include "honeygraph/tensors.hpp"

namespace honeygraph {

ReconstructionReport evaluate_reconstruction(const std::vector<ADGraph>& graphs,
                                             const ModelParams& params,
                                             const ModelConfig& config, bool want_curve) {
  ReconstructionReport r;
  ScoredEntries entries;
  double f1_sum = 0.0;
  for (const ADGraph& g : graphs) {
    const GraphTensors t = to_matrices(g, g.node_count());
    const EncodeResult enc = encode_mean(t, params);
    const Eigen::MatrixXd scores = reconstruct(t, enc, params);
    const Eigen::MatrixXd predicted = (scores.array() >= config.edge_threshold).cast<double>();
    const ConfusionCounts c = confusion(t.adjacency, predicted, t.mask);
    r.counts += c;
    f1_sum += prf1(c).f1;
    entries.append(t.adjacency, scores, t.mask);
    ++r.graphs;
  }
  r.pooled = prf1(r.counts);
  r.f1_per_graph_mean = r.graphs ? f1_sum / static_cast<double>(r.graphs) : 0.0;
  r.pr_auc = pr_auc(entries.scores, entries.labels);
  if (want_curve) r.curve = pr_curve(entries.scores, entries.labels);
  return r;
}

ExtensionReport evaluate_extension(const std::vector<ADGraph>& graphs, const ModelParams& params,
                                   const ModelConfig& config, std::size_t k, std::uint64_t seed) {
  ExtensionReport r;
  double evr = 0.0, mecr = 0.0, d_orig = 0.0, d_gen = 0.0, w_new = 0.0, w_all = 0.0;
  std::size_t with_nodes = 0, with_users = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const ADGraph& g = graphs[gi];
    Rng rng = make_rng(seed, {gi});
    const ExtensionResult x = extend_graph(params, config, g, k, rng);
    ++r.graphs;
    r.nodes_requested += k;
    r.nodes_kept += x.new_nodes.size();
    if (x.new_nodes.empty()) {
      ++r.graphs_without_new_nodes;
      continue;
    }
    ++with_nodes;
    evr += edge_validity_ratio(x.graph, x.new_nodes).evr;
    const std::vector<double> original = degree_sample(g);
    w_new += wasserstein_1d(original, degree_sample(x.graph, x.new_nodes));
    w_all += wasserstein_1d(original, degree_sample(x.graph));
    double gen_in = 0.0;
    for (const auto& id : x.new_nodes) gen_in += static_cast<double>(x.graph.in_degree(*x.graph.index_of(id)));
    d_gen += gen_in / static_cast<double>(x.new_nodes.size());
    if (g.count_of(NodeType::User) > 0) {
      const ExtensionMetrics m = extension_metrics(g, x.graph, x.new_nodes);
      mecr += m.mecr;
      d_orig += m.delta_in_original;
      ++with_users;
    }
  }
  if (with_nodes) {
    const double w = static_cast<double>(with_nodes);
    r.evr = evr / w;
    r.delta_in_generated = d_gen / w;
    r.wasserstein_new = w_new / w;
    r.wasserstein_all = w_all / w;
  }
  if (with_users) {
    r.mecr = mecr / static_cast<double>(with_users);
    r.delta_in_original = d_orig / static_cast<double>(with_users);
  }
  return r;
}

PairReport compare_graphs(const ADGraph& original, const ADGraph& extended) {
  for (const Node& n : original.nodes()) {
    if (!extended.contains(n.id)) {
      throw Error(ErrorKind::InvalidArgument, "extended graph lacks original node '" + n.id + "'");
    }
  }
  PairReport r;
  for (const Node& n : extended.nodes()) {
    if (!original.contains(n.id)) r.new_nodes.push_back(n.id);
  }
  const std::vector<double> base = degree_sample(original);
  r.wasserstein_all = wasserstein_1d(base, degree_sample(extended));
  if (r.new_nodes.empty()) return r;
  r.wasserstein_new = wasserstein_1d(base, degree_sample(extended, r.new_nodes));
  r.evr = edge_validity_ratio(extended, r.new_nodes).evr;
  if (original.count_of(NodeType::User) > 0) r.mecr = mean_edge_count_ratio(original, extended, r.new_nodes);
  return r;
}

}  // namespace honeygraph
