#include "sft/edge_list_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "sft/error.hpp"

namespace sft {

namespace {

struct RawEdge {
  std::string u;
  std::string v;
  double q;
  std::size_t line;
};

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_blanks(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

// "# nodes N" directive.
std::optional<std::size_t> node_count_directive(std::string_view line) {
  auto tokens = split_blanks(line.substr(1));
  std::size_t n = 0;
  if (tokens.size() == 2 && tokens[0] == "nodes" && parse_number(tokens[1], n)) return n;
  return std::nullopt;
}

}  // namespace

LabeledGraph parse_edge_list(std::istream& in) {
  std::vector<RawEdge> raw;
  std::optional<std::size_t> declared_nodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    auto tokens = split_blanks(view);
    if (tokens.empty()) continue;
    if (tokens[0].front() == '#') {
      if (auto n = node_count_directive(view)) declared_nodes = n;
      continue;
    }
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw Error(ErrorCode::kParseError, "expected 'u v [q]', got " + std::to_string(tokens.size()) + " fields",
                  line_no);
    }
    double q = 1.0;
    if (tokens.size() == 3 && !parse_number(tokens[2], q)) {
      throw Error(ErrorCode::kParseError, "bad probability '" + std::string(tokens[2]) + "'", line_no);
    }
    if (!(q >= 0.0 && q <= 1.0)) {
      throw Error(ErrorCode::kWeightOutOfRange, "probability " + std::string(tokens[2]) + " outside [0, 1]", line_no);
    }
    if (tokens[0] == tokens[1]) {
      throw Error(ErrorCode::kSelfLoop, "self-loop at node " + std::string(tokens[0]), line_no);
    }
    raw.push_back({std::string(tokens[0]), std::string(tokens[1]), q, line_no});
  }

  bool numeric = true;
  std::size_t max_id_plus_one = 0;
  for (const RawEdge& e : raw) {
    NodeId a = 0, b = 0;
    if (!parse_number(std::string_view(e.u), a) || !parse_number(std::string_view(e.v), b)) {
      numeric = false;
      break;
    }
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, std::max(a, b) + std::size_t{1});
  }

  LabeledGraph out;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::unordered_map<std::string, NodeId> index;
  auto id_of = [&](const std::string& label) {
    auto [it, inserted] = index.try_emplace(label, static_cast<NodeId>(out.labels.size()));
    if (inserted) out.labels.push_back(label);
    return it->second;
  };

  std::set<std::pair<NodeId, NodeId>> seen;
  for (const RawEdge& e : raw) {
    NodeId a = 0, b = 0;
    if (numeric) {
      parse_number(std::string_view(e.u), a);
      parse_number(std::string_view(e.v), b);
    } else {
      a = id_of(e.u);
      b = id_of(e.v);
    }
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      throw Error(ErrorCode::kDuplicateEdge, "duplicate edge " + e.u + " - " + e.v, e.line);
    }
    edges.push_back({a, b, e.q});
  }

  std::size_t n = numeric ? max_id_plus_one : out.labels.size();
  if (declared_nodes) {
    if (*declared_nodes < n) {
      throw Error(ErrorCode::kNodeOutOfRange,
                  "edges reference " + std::to_string(n) + " nodes but header declares " +
                      std::to_string(*declared_nodes));
    }
    n = *declared_nodes;
  }
  out.graph = build_graph(n, std::move(edges));
  return out;
}

LabeledGraph read_labeled_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_edge_list(in);
}

Graph read_edge_list(const std::filesystem::path& path) {
  return read_labeled_edge_list(path).graph;
}

void format_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes " << g.node_count() << '\n';
  char buf[32];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.q);
    out << e.u << '\t' << e.v << '\t' << buf << '\n';
  }
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  format_edge_list(g, out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace sft
