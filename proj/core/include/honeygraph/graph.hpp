#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace honeygraph {

enum class NodeType : int {
  User = 0,
  Computer = 1,
  Domain = 2,
  OrganizationalUnit = 3,
  Group = 4,
};

inline constexpr std::size_t kNodeTypeCount = 5;

inline constexpr std::array<NodeType, kNodeTypeCount> kAllNodeTypes = {
    NodeType::User, NodeType::Computer, NodeType::Domain,
    NodeType::OrganizationalUnit, NodeType::Group};

constexpr int type_index(NodeType t) noexcept { return static_cast<int>(t); }

std::string_view to_string(NodeType t) noexcept;

/// Accepts the canonical names plus the common short forms ("OU"), case
/// insensitive. Returns nullopt for anything outside the five retained types.
std::optional<NodeType> parse_node_type(std::string_view name);

/// AD schema relation between a container/privilege source and its target.
bool is_valid_edge(NodeType source, NodeType target) noexcept;

using Attributes = std::map<std::string, std::string>;

struct Node {
  std::string id;
  NodeType type = NodeType::User;
  Attributes attributes;
};

struct Edge {
  std::string source;
  std::string target;

  auto operator<=>(const Edge&) const = default;
};

/// Immutable typed DAG of AD objects. Construction validates every invariant
/// (non-empty, unique ids, existing endpoints, no self-loops or duplicate
/// edges, acyclic) and throws honeygraph::Error otherwise.
class ADGraph {
 public:
  ADGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const Node& node(std::size_t index) const { return nodes_.at(index); }
  const Node& node(std::string_view id) const;
  bool contains(std::string_view id) const { return index_of(id).has_value(); }
  bool has_edge(std::string_view source, std::string_view target) const;

  /// Neighbour lists by node index, each sorted by node id.
  const std::vector<std::size_t>& predecessors(std::size_t index) const {
    return preds_.at(index);
  }
  const std::vector<std::size_t>& successors(std::size_t index) const {
    return succs_.at(index);
  }

  std::size_t in_degree(std::size_t index) const { return preds_.at(index).size(); }
  std::size_t out_degree(std::size_t index) const { return succs_.at(index).size(); }
  std::size_t degree(std::size_t index) const { return in_degree(index) + out_degree(index); }

  std::size_t count_of(NodeType t) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::vector<std::size_t>> succs_;
};

/// Kahn's algorithm with the ready set ordered by node id.
std::vector<std::string> topological_sort(const ADGraph& graph);

/// Result of attaching candidate nodes as sinks below an existing graph.
struct ExtensionOutcome {
  ADGraph graph;
  std::vector<std::string> added_ids;     // kept new nodes, in candidate order
  std::vector<std::size_t> discarded;     // candidate rows with no edge
};

/// Adds one sink per row of `edge_scores` whose maximum score reaches
/// `threshold`, with an edge from every original node scoring at or above it.
/// Columns of `edge_scores` follow topological_sort(graph).
/// New node ids are "honeyuser_<row>" (suffixed if that id is taken).
ExtensionOutcome from_extension(const ADGraph& graph,
                                const std::vector<NodeType>& new_node_types,
                                const Eigen::MatrixXd& edge_scores,
                                double threshold);

}  // namespace honeygraph
