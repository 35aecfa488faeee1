#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace sft {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Undirected edge with its infection probability. Canonical form has u < v.
struct Edge {
  NodeId u;
  NodeId v;
  double q;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  double q;
  EdgeId edge;  // index into Graph::edges()
};

// Hop distance from one source to every node; kUnreachable where no path exists.
using DistanceMap = std::vector<std::uint32_t>;

/// Immutable undirected simple graph with per-edge infection probabilities.
///
/// Stored as compressed adjacency. Edges are kept in ascending (u, v) order and
/// every adjacency list is sorted by neighbor id, so iteration order is the
/// same for equal graphs regardless of how they were built.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const Neighbor> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool contains(NodeId v) const noexcept { return v < node_count(); }

  // Copy of this graph with edge i's probability replaced by q[i].
  Graph with_weights(std::span<const double> q) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count() == b.node_count() && a.edges_ == b.edges_;
  }

 private:
  friend Graph build_graph(std::size_t n, std::vector<Edge> edges);

  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

// Validates and canonicalizes. Throws sft::Error with kNodeOutOfRange,
// kSelfLoop, kWeightOutOfRange or kDuplicateEdge.
Graph build_graph(std::size_t n, std::vector<Edge> edges);

DistanceMap bfs_distances(const Graph& g, NodeId source);

}  // namespace sft
