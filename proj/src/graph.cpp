#include "sft/graph.hpp"

#include <algorithm>
#include <string>

#include "sft/error.hpp"

namespace sft {

namespace {

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")";
}

}  // namespace

Graph build_graph(std::size_t n, std::vector<Edge> edges) {
  if (n > std::numeric_limits<NodeId>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "node count exceeds NodeId range");
  }
  for (Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorCode::kNodeOutOfRange,
                  "edge " + edge_text(e) + " references a node outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) throw Error(ErrorCode::kSelfLoop, "self-loop at node " + std::to_string(e.u));
    if (!(e.q >= 0.0 && e.q <= 1.0)) {
      throw Error(ErrorCode::kWeightOutOfRange,
                  "edge " + edge_text(e) + " has probability " + std::to_string(e.q) + " outside [0, 1]");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  auto dup = std::adjacent_find(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v;
  });
  if (dup != edges.end()) throw Error(ErrorCode::kDuplicateEdge, "duplicate edge " + edge_text(*dup));

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];

  g.adjacency_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Two passes over the sorted edges leave every list sorted: smaller
  // neighbors first (ascending u), then larger ones (ascending v).
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    g.adjacency_[cursor[e.v]++] = Neighbor{e.u, e.q, id};
  }
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    g.adjacency_[cursor[e.u]++] = Neighbor{e.v, e.q, id};
  }
  g.edges_ = std::move(edges);
  return g;
}

Graph Graph::with_weights(std::span<const double> q) const {
  if (q.size() != edges_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "weight vector size does not match edge count");
  }
  Graph out = *this;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] >= 0.0 && q[i] <= 1.0)) {
      throw Error(ErrorCode::kWeightOutOfRange, "probability " + std::to_string(q[i]) + " outside [0, 1]");
    }
    out.edges_[i].q = q[i];
  }
  for (Neighbor& nb : out.adjacency_) nb.q = q[nb.edge];
  return out;
}

DistanceMap bfs_distances(const Graph& g, NodeId source) {
  if (!g.contains(source)) {
    throw Error(ErrorCode::kNodeOutOfRange, "source " + std::to_string(source) + " not in graph");
  }
  DistanceMap dist(g.node_count(), kUnreachable);
  std::vector<NodeId> queue;
  queue.reserve(g.node_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (const Neighbor& nb : g.neighbors(u)) {
      if (dist[nb.node] == kUnreachable) {
        dist[nb.node] = dist[u] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  return dist;
}

}  // namespace sft
