#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sphere/graph.hpp"

namespace sphere {

/// A graph read from an edge list, with the file's node ids kept so results
/// can be reported in the original numbering.
struct LoadedGraph {
    WeightedGraph graph;
    std::vector<std::int64_t> original_ids;  // dense id -> file id
};

/// Reads whitespace-separated `u v` or `u v w` lines; `#` starts a comment
/// line. Nodes are renumbered densely in ascending file-id order, self-loops
/// are dropped, and repeated pairs (either orientation) keep the first weight.
LoadedGraph load_edge_list(std::istream& in, std::string_view source_name = "<stream>");
LoadedGraph load_edge_list(const std::filesystem::path& path);

/// Writes `u<TAB>v` lines when every weight is 1 and `u<TAB>v<TAB>w` otherwise.
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void write_edge_list(const std::filesystem::path& path, const WeightedGraph& g);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace sphere
