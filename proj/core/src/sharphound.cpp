#include "honeygraph/sharphound.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <json.hpp>

#include "honeygraph/error.hpp"

namespace honeygraph {

using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string string_field(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = obj.find(k);
    if (it != obj.end() && it->is_string()) return it->get<std::string>();
  }
  return {};
}

enum class EdgeKind { Forward, Reversed, Ignored };

EdgeKind classify(const std::string& kind) {
  const std::string k = lower(kind);
  if (k.empty() || k == "contains" || k == "member") return EdgeKind::Forward;
  if (k == "memberof") return EdgeKind::Reversed;
  return EdgeKind::Ignored;
}

// Iterative DFS over nodes in id order; an edge to a node still on the stack
// closes a cycle and is dropped.
std::vector<Edge> drop_back_edges(const std::vector<Node>& nodes, std::vector<Edge>& edges) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const Node& n : nodes) adj[n.id];
  for (const Edge& e : edges) adj[e.source].push_back(e.target);
  for (auto& [_, out] : adj) std::sort(out.begin(), out.end());

  enum class Color { White, Gray, Black };
  std::map<std::string, Color> color;
  for (const auto& [id, _] : adj) color[id] = Color::White;

  std::set<Edge> back;
  for (const auto& [root, _] : adj) {
    if (color[root] != Color::White) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{root, 0}};
    color[root] = Color::Gray;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& out = adj[u];
      if (next == out.size()) {
        color[u] = Color::Black;
        stack.pop_back();
        continue;
      }
      const std::string v = out[next++];
      if (color[v] == Color::Gray) {
        back.insert(Edge{u, v});
      } else if (color[v] == Color::White) {
        color[v] = Color::Gray;
        stack.emplace_back(v, 0);
      }
    }
  }

  std::vector<Edge> dropped(back.begin(), back.end());
  std::erase_if(edges, [&back](const Edge& e) { return back.count(e) > 0; });
  return dropped;
}

}  // namespace

bool is_native_graph_json(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return false;
  auto edges = doc.find("edges");
  auto nodes = doc.find("nodes");
  if (nodes == doc.end() || !nodes->is_array()) return false;
  if (edges != doc.end() && edges->is_array() && !edges->empty()) {
    return (*edges)[0].is_array();
  }
  for (const auto& n : *nodes) {
    if (!n.is_object() || !n.contains("id")) return false;
    for (const auto& [k, _] : n.items()) {
      if (k != "id" && k != "type" && k != "attributes") return false;
    }
  }
  return true;
}

SharpHoundImport import_sharphound(std::string_view export_text) {
  json doc;
  try {
    doc = json::parse(export_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedInput, std::string("SharpHound export: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw Error(ErrorKind::MalformedInput, "SharpHound export: missing \"nodes\" array");
  }

  std::size_t input_objects = 0;
  std::size_t filtered = 0;
  std::vector<Node> nodes;
  std::set<std::string> ids;
  for (const auto& obj : doc["nodes"]) {
    ++input_objects;
    if (!obj.is_object()) {
      throw Error(ErrorKind::MalformedInput, "SharpHound export: node record is not an object");
    }
    const std::string name = string_field(obj, {"name", "Name"});
    std::string id = string_field(obj, {"id", "objectid", "ObjectIdentifier"});
    if (id.empty()) id = name;
    const std::string type_label = string_field(obj, {"type", "label", "kind"});
    if (id.empty() || type_label.empty()) {
      throw Error(ErrorKind::MalformedInput,
                  "SharpHound export: node record needs a type and a name or id");
    }
    auto type = parse_node_type(type_label);
    if (!type) {
      ++filtered;
      continue;
    }
    if (!ids.insert(id).second) {
      throw Error(ErrorKind::MalformedInput, "SharpHound export: duplicate object '" + id + "'");
    }
    Node node{id, *type, {}};
    for (const auto& [k, v] : obj.items()) {
      if (k == "id" || k == "type" || k == "label" || k == "kind") continue;
      if (v.is_string()) node.attributes[lower(k)] = v.get<std::string>();
    }
    if (!name.empty()) node.attributes["name"] = name;
    nodes.push_back(std::move(node));
  }
  if (nodes.empty()) {
    throw Error(ErrorKind::EmptyGraph, "SharpHound export: no User/Computer/Domain/OU/Group objects");
  }

  std::size_t ignored = 0;
  std::set<Edge> unique_edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) {
      throw Error(ErrorKind::MalformedInput, "SharpHound export: \"edges\" must be an array");
    }
    for (const auto& rec : doc["edges"]) {
      if (!rec.is_object()) {
        throw Error(ErrorKind::MalformedInput, "SharpHound export: edge record is not an object");
      }
      std::string src = string_field(rec, {"source", "start", "from"});
      std::string dst = string_field(rec, {"target", "end", "to"});
      const EdgeKind kind = classify(string_field(rec, {"kind", "label", "type"}));
      if (src.empty() || dst.empty()) {
        throw Error(ErrorKind::MalformedInput, "SharpHound export: edge needs source and target");
      }
      if (kind == EdgeKind::Ignored || !ids.count(src) || !ids.count(dst) || src == dst) {
        ++ignored;
        continue;
      }
      if (kind == EdgeKind::Reversed) std::swap(src, dst);
      unique_edges.insert(Edge{src, dst});
    }
  }

  std::vector<Edge> edges(unique_edges.begin(), unique_edges.end());
  std::vector<Edge> dropped = drop_back_edges(nodes, edges);

  return SharpHoundImport{ADGraph(std::move(nodes), std::move(edges)), input_objects, filtered,
                          ignored, std::move(dropped)};
}

}  // namespace honeygraph
