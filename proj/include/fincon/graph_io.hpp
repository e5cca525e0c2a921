#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fincon/graph.hpp"

namespace fincon {

enum class GraphFormat { Dimacs, EdgeList, Json };

// Grammars:
//   dimacs     "c ..." comments, one "p edge <n> <m>" (or "p col"), then
//              "e <i> <j>" lines. Duplicate edges collapse.
//   edge-list  optional first line "n=<n>", then "<i> <j>" per line; '#'
//              starts a comment. Without a header n is the largest label.
//   json       {"n": <int>, "edges": [[i, j], ...]}
// Errors are ParseError carrying the 1-based line number (1 for json).
// vertex_count overrides the edge-list header when given.
Graph parse_graph(std::string_view text, GraphFormat format,
                  std::optional<int> vertex_count = std::nullopt);

Graph read_graph_file(const std::string& path, std::optional<GraphFormat> format = std::nullopt);

// ".col"/".dimacs"/".clq" -> dimacs, ".json" -> json, anything else edge-list.
GraphFormat format_from_path(const std::string& path);
std::optional<GraphFormat> format_from_name(std::string_view name);

std::string write_graph(const Graph& g, GraphFormat format);

}  // namespace fincon
