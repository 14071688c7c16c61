#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "honeygraph/graph.hpp"

namespace honeygraph {

/// What ingestion kept and threw away.
struct SharpHoundImport {
  ADGraph graph;
  std::size_t input_objects = 0;
  std::size_t filtered_objects = 0;   // types outside the retained five
  std::size_t ignored_edges = 0;      // non-membership kinds or dangling endpoints
  std::vector<Edge> dropped_back_edges;
};

/// Reads a nodes/edges style collection export:
///
///   {"nodes":[{"id":"S-1-5-..","name":"JDOE@CORP.LOCAL","type":"User",...}],
///    "edges":[{"source":"..","target":"..","kind":"MemberOf"}]}
///
/// `id` falls back to `name` when absent. Edge kinds Contains, Member and
/// MemberOf (and unlabeled edges) are kept; MemberOf is stated member -> group
/// and gets reversed so every edge points from the container. Back-edges found
/// by a DFS over nodes and successors in id order are dropped and reported.
SharpHoundImport import_sharphound(std::string_view export_text);

inline ADGraph parse_sharphound(std::string_view export_text) {
  return import_sharphound(export_text).graph;
}

/// True when the text looks like a native graph document rather than an export.
bool is_native_graph_json(std::string_view text);

}  // namespace honeygraph
