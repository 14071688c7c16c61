#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "honeygraph/graph.hpp"

namespace honeygraph {

/// Native interchange format:
///   {"nodes":[{"id":..,"type":..,"attributes":{..}}],"edges":[["src","dst"],..]}
/// Output is deterministic: nodes and edges are written in graph order,
/// two-space indentation, trailing newline.
std::string to_native_json(const ADGraph& graph);
ADGraph from_native_json(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Loads either a native graph document or a SharpHound-style export,
/// deciding by shape (native edges are two-element arrays).
ADGraph load_graph_file(const std::filesystem::path& path);

}  // namespace honeygraph
