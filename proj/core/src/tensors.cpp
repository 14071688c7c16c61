#include "honeygraph/tensors.hpp"

#include <unordered_map>

#include "honeygraph/error.hpp"

namespace honeygraph {

std::vector<std::size_t> GraphTensors::predecessors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < i; ++j) {
    if (adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) {
      out.push_back(j);
    }
  }
  return out;
}

GraphTensors to_matrices(const ADGraph& graph, std::size_t n_pad) {
  const std::size_t n = graph.node_count();
  if (n_pad < n) {
    throw Error(ErrorKind::Capacity, "n_pad " + std::to_string(n_pad) + " is smaller than the " +
                                         std::to_string(n) + " graph nodes");
  }

  GraphTensors t;
  t.n = n;
  t.n_pad = n_pad;
  t.order = topological_sort(graph);
  const auto pad = static_cast<Eigen::Index>(n_pad);
  t.types = Eigen::VectorXi::Zero(pad);
  t.adjacency = Eigen::MatrixXd::Zero(pad, pad);
  t.mask = Eigen::VectorXd::Zero(pad);

  std::unordered_map<std::string, Eigen::Index> row_of;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    row_of.emplace(t.order[i], row);
    t.types(row) = type_index(graph.node(t.order[i]).type);
    t.mask(row) = 1.0;
  }
  for (const Edge& e : graph.edges()) {
    t.adjacency(row_of.at(e.target), row_of.at(e.source)) = 1.0;
  }
  t.adjacency_t = t.adjacency.transpose();
  return t;
}

ADGraph from_matrices(const GraphTensors& tensors) {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < tensors.n; ++i) {
    const int ti = tensors.types(static_cast<Eigen::Index>(i));
    nodes.push_back(Node{tensors.order.at(i), static_cast<NodeType>(ti), {}});
    for (std::size_t j : tensors.predecessors(i)) {
      edges.push_back(Edge{tensors.order.at(j), tensors.order.at(i)});
    }
  }
  return ADGraph(std::move(nodes), std::move(edges));
}

}  // namespace honeygraph
