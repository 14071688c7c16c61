#include "honeygraph/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "honeygraph/error.hpp"
#include "honeygraph/sharphound.hpp"

namespace honeygraph {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string to_native_json(const ADGraph& graph) {
  ordered_json doc;
  ordered_json nodes = ordered_json::array();
  for (const Node& n : graph.nodes()) {
    ordered_json attrs = ordered_json::object();
    for (const auto& [k, v] : n.attributes) attrs[k] = v;
    nodes.push_back(ordered_json{{"id", n.id}, {"type", to_string(n.type)}, {"attributes", attrs}});
  }
  ordered_json edges = ordered_json::array();
  for (const Edge& e : graph.edges()) edges.push_back(ordered_json::array({e.source, e.target}));
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

ADGraph from_native_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedInput, std::string("graph JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw Error(ErrorKind::MalformedInput, "graph JSON: missing \"nodes\" array");
  }

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  try {
    for (const auto& jn : doc["nodes"]) {
      Node node;
      node.id = jn.at("id").get<std::string>();
      auto type = parse_node_type(jn.at("type").get<std::string>());
      if (!type) {
        throw Error(ErrorKind::MalformedInput,
                    "graph JSON: unknown node type for '" + node.id + "'");
      }
      node.type = *type;
      if (jn.contains("attributes")) {
        for (const auto& [k, v] : jn["attributes"].items()) {
          node.attributes[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
      }
      nodes.push_back(std::move(node));
    }
    if (doc.contains("edges")) {
      for (const auto& je : doc["edges"]) {
        if (!je.is_array() || je.size() != 2) {
          throw Error(ErrorKind::MalformedInput, "graph JSON: edges must be [src, dst] pairs");
        }
        edges.push_back(Edge{je[0].get<std::string>(), je[1].get<std::string>()});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("graph JSON: ") + e.what());
  }
  return ADGraph(std::move(nodes), std::move(edges));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

ADGraph load_graph_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (is_native_graph_json(text)) return from_native_json(text);
  return parse_sharphound(text);
}

}  // namespace honeygraph
