#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sft/graph.hpp"

namespace sft {

// Graph plus the original node labels of an ingested file. labels is empty
// when the file already used dense integer ids; otherwise labels[id] is the
// token that id was assigned to (in order of first appearance).
struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;
};

// Text format: one edge per line, "u<TAB>v[<TAB>q]" (any run of blanks is
// accepted as a separator), q defaults to 1.0. Lines starting with '#' are
// comments; the comment "# nodes N" sets the node count so that isolated
// trailing nodes survive a round trip.
LabeledGraph parse_edge_list(std::istream& in);
LabeledGraph read_labeled_edge_list(const std::filesystem::path& path);
Graph read_edge_list(const std::filesystem::path& path);

void format_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::filesystem::path& path);

}  // namespace sft
