#include "honeygraph/graph.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "honeygraph/error.hpp"

namespace honeygraph {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedInput: return "malformed-input";
    case ErrorKind::EmptyGraph: return "empty-graph";
    case ErrorKind::InvalidGraph: return "invalid-graph";
    case ErrorKind::CycleDetected: return "cycle-detected";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::NoUsers: return "no-users";
    case ErrorKind::Unreachable: return "unreachable";
    case ErrorKind::CorpusExhausted: return "corpus-exhausted";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

std::string_view to_string(NodeType t) noexcept {
  switch (t) {
    case NodeType::User: return "User";
    case NodeType::Computer: return "Computer";
    case NodeType::Domain: return "Domain";
    case NodeType::OrganizationalUnit: return "OrganizationalUnit";
    case NodeType::Group: return "Group";
  }
  return "User";
}

std::optional<NodeType> parse_node_type(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "user" || lower == "users") return NodeType::User;
  if (lower == "computer" || lower == "computers") return NodeType::Computer;
  if (lower == "domain" || lower == "domains") return NodeType::Domain;
  if (lower == "organizationalunit" || lower == "ou" || lower == "ous") {
    return NodeType::OrganizationalUnit;
  }
  if (lower == "group" || lower == "groups") return NodeType::Group;
  return std::nullopt;
}

bool is_valid_edge(NodeType source, NodeType target) noexcept {
  using T = NodeType;
  switch (source) {
    case T::Domain:
      return target == T::OrganizationalUnit || target == T::Group;
    case T::OrganizationalUnit:
      return target == T::OrganizationalUnit || target == T::User ||
             target == T::Computer || target == T::Group;
    case T::Group:
      return target == T::User || target == T::Computer || target == T::Group;
    case T::User:
    case T::Computer:
      return false;
  }
  return false;
}

ADGraph::ADGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  if (nodes_.empty()) {
    throw Error(ErrorKind::EmptyGraph, "graph has no nodes");
  }
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id.empty()) {
      throw Error(ErrorKind::InvalidGraph, "node with empty id");
    }
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw Error(ErrorKind::InvalidGraph, "duplicate node id '" + nodes_[i].id + "'");
    }
  }

  preds_.assign(nodes_.size(), {});
  succs_.assign(nodes_.size(), {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Edge& e : edges_) {
    auto s = index_.find(e.source);
    auto t = index_.find(e.target);
    if (s == index_.end() || t == index_.end()) {
      throw Error(ErrorKind::InvalidGraph,
                  "edge " + e.source + " -> " + e.target + " references a missing node");
    }
    if (s->second == t->second) {
      throw Error(ErrorKind::InvalidGraph, "self-loop on '" + e.source + "'");
    }
    if (!seen.emplace(s->second, t->second).second) {
      throw Error(ErrorKind::InvalidGraph,
                  "duplicate edge " + e.source + " -> " + e.target);
    }
    succs_[s->second].push_back(t->second);
    preds_[t->second].push_back(s->second);
  }

  auto by_id = [this](std::size_t a, std::size_t b) { return nodes_[a].id < nodes_[b].id; };
  for (auto& list : preds_) std::sort(list.begin(), list.end(), by_id);
  for (auto& list : succs_) std::sort(list.begin(), list.end(), by_id);

  // Acyclicity: Kahn's algorithm must consume every node.
  std::vector<std::size_t> indeg(nodes_.size());
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    indeg[i] = preds_[i].size();
    if (indeg[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    std::size_t u = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t v : succs_[u]) {
      if (--indeg[v] == 0) ready.push_back(v);
    }
  }
  if (visited != nodes_.size()) {
    throw Error(ErrorKind::CycleDetected, "edge relation contains a cycle");
  }
}

std::optional<std::size_t> ADGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Node& ADGraph::node(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx) throw Error(ErrorKind::InvalidArgument, "unknown node '" + std::string(id) + "'");
  return nodes_[*idx];
}

bool ADGraph::has_edge(std::string_view source, std::string_view target) const {
  auto s = index_of(source);
  auto t = index_of(target);
  if (!s || !t) return false;
  const auto& out = succs_[*s];
  return std::find(out.begin(), out.end(), *t) != out.end();
}

std::size_t ADGraph::count_of(NodeType t) const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [t](const Node& n) { return n.type == t; }));
}

std::vector<std::string> topological_sort(const ADGraph& graph) {
  const std::size_t n = graph.node_count();
  auto by_id = [&graph](std::size_t a, std::size_t b) {
    return graph.node(a).id < graph.node(b).id;
  };
  std::set<std::size_t, decltype(by_id)> ready(by_id);
  std::vector<std::size_t> indeg(n);
  for (std::size_t i = 0; i < n; ++i) {
    indeg[i] = graph.in_degree(i);
    if (indeg[i] == 0) ready.insert(i);
  }

  std::vector<std::string> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t u = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(graph.node(u).id);
    for (std::size_t v : graph.successors(u)) {
      if (--indeg[v] == 0) ready.insert(v);
    }
  }
  if (order.size() != n) {
    throw Error(ErrorKind::CycleDetected, "topological sort: graph contains a cycle");
  }
  return order;
}

ExtensionOutcome from_extension(const ADGraph& graph,
                                const std::vector<NodeType>& new_node_types,
                                const Eigen::MatrixXd& edge_scores, double threshold) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (edge_scores.cols() != n) {
    throw Error(ErrorKind::ShapeMismatch,
                "score matrix has " + std::to_string(edge_scores.cols()) +
                    " columns, graph has " + std::to_string(n) + " nodes");
  }
  if (edge_scores.rows() != static_cast<Eigen::Index>(new_node_types.size())) {
    throw Error(ErrorKind::ShapeMismatch, "one node type is required per score row");
  }

  const std::vector<std::string> order = topological_sort(graph);
  std::vector<Node> nodes = graph.nodes();
  std::vector<Edge> edges = graph.edges();
  std::vector<std::string> added;
  std::vector<std::size_t> discarded;

  for (Eigen::Index row = 0; row < edge_scores.rows(); ++row) {
    std::vector<std::string> sources;
    for (Eigen::Index col = 0; col < n; ++col) {
      if (edge_scores(row, col) >= threshold) sources.push_back(order[col]);
    }
    if (sources.empty()) {
      discarded.push_back(static_cast<std::size_t>(row));
      continue;
    }
    std::string id = "honeyuser_" + std::to_string(row);
    for (int suffix = 1; graph.contains(id); ++suffix) {
      id = "honeyuser_" + std::to_string(row) + "_" + std::to_string(suffix);
    }
    nodes.push_back(Node{id, new_node_types[static_cast<std::size_t>(row)], {}});
    for (auto& s : sources) edges.push_back(Edge{std::move(s), id});
    added.push_back(std::move(id));
  }

  return ExtensionOutcome{ADGraph(std::move(nodes), std::move(edges)), std::move(added),
                          std::move(discarded)};
}

}  // namespace honeygraph
