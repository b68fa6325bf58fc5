#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "netdyn/graph.hpp"

namespace netdyn {

/// Loads a graph from a bundled dataset name ("karate"), a JSON graph file
/// (".json" extension or content starting with '{') or an edge list.
Graph load_graph(std::string_view source);

/// Edge list: one edge per line, `src dst [weight]`, whitespace- or
/// comma-separated, '#' starts a comment line. A line holding a single
/// identifier declares an isolated node. Nodes are indexed in order of first
/// appearance.
Graph read_edge_list(std::istream& in);
/// {"nodes": [string], "edges": [{"source", "target", "weight"}]}
Graph read_json_graph(std::istream& in);

void write_edge_list(std::ostream& out, const Graph& g);

/// Partition CSV with header `node,cell`, one row per node of `g`. Cell
/// labels may be arbitrary strings; cells are numbered by first appearance in
/// node order.
Partition read_partition_csv(std::istream& in, const Graph& g);
Partition read_partition_csv(const std::filesystem::path& path, const Graph& g);
void write_partition_csv(std::ostream& out, const Graph& g, const Partition& p);

/// Writes every line of `text` prefixed with "# ".
void write_comment_header(std::ostream& out, std::string_view text);

}  // namespace netdyn
