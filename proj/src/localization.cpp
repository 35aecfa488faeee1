#include "sft/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sft/error.hpp"

namespace sft {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSftWbnd: return "sft-wbnd";
    case Algorithm::kSftBnd: return "sft-bnd";
    case Algorithm::kEcce: return "ecce";
    case Algorithm::kRum: return "rum";
    case Algorithm::kNetsleuth: return "netsleuth";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view tag) {
  for (Algorithm a : {Algorithm::kSftWbnd, Algorithm::kSftBnd, Algorithm::kEcce, Algorithm::kRum,
                      Algorithm::kNetsleuth}) {
    if (to_string(a) == tag) return a;
  }
  return std::nullopt;
}

InfectionSubgraph::InfectionSubgraph(const Graph& g, std::span<const NodeId> infected)
    : nodes_(infected.begin(), infected.end()), local_(g.node_count(), kUnreachable) {
  if (nodes_.empty()) throw Error(ErrorCode::kInvalidArgument, "infected set is empty");
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "infected set has duplicates");
  }
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (!g.contains(nodes_[i])) {
      throw Error(ErrorCode::kNodeOutOfRange, "infected node " + std::to_string(nodes_[i]) + " not in graph");
    }
    local_[nodes_[i]] = i;
  }
  offsets_.assign(nodes_.size() + 1, 0);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    for (const Neighbor& nb : g.neighbors(nodes_[i])) {
      if (local_[nb.node] != kUnreachable) adjacency_.push_back(local_[nb.node]);
    }
    offsets_[i + 1] = adjacency_.size();
  }

  const auto dist = distances_from(0);
  if (std::find(dist.begin(), dist.end(), kUnreachable) != dist.end()) {
    throw Error(ErrorCode::kDisconnectedInfection, "infected nodes do not form one connected component");
  }
}

std::vector<std::uint32_t> InfectionSubgraph::distances_from(std::uint32_t local) const {
  std::vector<std::uint32_t> dist(size(), kUnreachable);
  std::vector<std::uint32_t> queue{local};
  queue.reserve(size());
  dist[local] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t u = queue[head];
    for (std::uint32_t w : neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

InfectionSubgraph infection_subgraph(const Graph& g, std::span<const NodeId> infected) {
  return InfectionSubgraph(g, infected);
}

std::uint32_t EccentricityTable::min() const {
  if (ecc.empty()) throw Error(ErrorCode::kInvalidArgument, "empty eccentricity table");
  return *std::min_element(ecc.begin(), ecc.end());
}

namespace {

// Reusable BFS state over g_i. Distances are reset lazily via the queue.
class SubgraphBfs {
 public:
  explicit SubgraphBfs(const InfectionSubgraph& gi) : gi_(gi), dist_(gi.size(), kUnreachable) {
    queue_.reserve(gi.size());
  }

  // Full BFS from root; returns its eccentricity. With a limit, gives up as
  // soon as some node lies farther than limit and returns kUnreachable.
  std::uint32_t run(std::uint32_t root, std::uint32_t limit = kUnreachable) {
    for (std::uint32_t v : queue_) dist_[v] = kUnreachable;
    queue_.clear();
    dist_[root] = 0;
    queue_.push_back(root);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::uint32_t u = queue_[head];
      const std::uint32_t next = dist_[u] + 1;
      for (std::uint32_t w : gi_.neighbors(u)) {
        if (dist_[w] != kUnreachable) continue;
        if (next > limit) return kUnreachable;
        dist_[w] = next;
        queue_.push_back(w);
      }
    }
    return dist_[queue_.back()];
  }

  // Boundary of the last full run, ascending local id, with min-id parents.
  void boundary(std::vector<std::uint32_t>& nodes, std::vector<std::uint32_t>& parents) const {
    nodes.clear();
    parents.clear();
    const std::uint32_t ecc = dist_[queue_.back()];
    for (auto it = queue_.rbegin(); it != queue_.rend() && dist_[*it] == ecc; ++it) nodes.push_back(*it);
    std::sort(nodes.begin(), nodes.end());
    for (std::uint32_t u : nodes) {
      std::uint32_t parent = kUnreachable;
      if (ecc > 0) {
        for (std::uint32_t w : gi_.neighbors(u)) {
          if (dist_[w] == ecc - 1) {
            parent = w;
            break;
          }
        }
      }
      parents.push_back(parent);
    }
  }

 private:
  const InfectionSubgraph& gi_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::uint32_t> queue_;
};

double weight_term(double q) { return -std::log1p(-std::min(q, kMaxWeightProbability)); }

struct BoundaryScores {
  double wbnd = 0.0;
  std::uint64_t bnd = 0;
};

BoundaryScores score_boundary(const Graph& g, const InfectionSubgraph& gi, const std::vector<std::uint32_t>& nodes,
                              const std::vector<std::uint32_t>& parents) {
  BoundaryScores s;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId u = gi.global(nodes[i]);
    const bool has_parent = parents[i] != kUnreachable;
    const NodeId parent = has_parent ? gi.global(parents[i]) : u;
    for (const Neighbor& nb : g.neighbors(u)) {
      if (has_parent && nb.node == parent) continue;
      s.wbnd += weight_term(nb.q);
    }
    s.bnd += g.degree(u) - (has_parent ? 1 : 0);
  }
  return s;
}

std::uint32_t require_local(const InfectionSubgraph& gi, NodeId v) {
  if (!gi.contains(v)) throw Error(ErrorCode::kInvalidArgument, "node " + std::to_string(v) + " is not infected");
  return gi.local(v);
}

}  // namespace

EccentricityTable eccentricities(const InfectionSubgraph& gi) {
  EccentricityTable table;
  table.ecc.resize(gi.size());
  SubgraphBfs bfs(gi);
  for (std::uint32_t v = 0; v < gi.size(); ++v) table.ecc[v] = bfs.run(v);
  return table;
}

std::vector<NodeId> jordan_centers(const InfectionSubgraph& gi, const EccentricityTable& table) {
  const std::uint32_t best = table.min();
  std::vector<NodeId> centers;
  for (std::uint32_t v = 0; v < table.ecc.size(); ++v) {
    if (table.ecc[v] == best) centers.push_back(gi.global(v));
  }
  return centers;
}

BoundarySet boundary_nodes(const InfectionSubgraph& gi, NodeId v) {
  SubgraphBfs bfs(gi);
  BoundarySet out;
  out.eccentricity = bfs.run(require_local(gi, v));
  std::vector<std::uint32_t> nodes, parents;
  bfs.boundary(nodes, parents);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    BoundaryNode b{gi.global(nodes[i]), std::nullopt};
    if (parents[i] != kUnreachable) b.parent = gi.global(parents[i]);
    out.nodes.push_back(b);
  }
  return out;
}

double wbnd(const Graph& g, const InfectionSubgraph& gi, NodeId v) {
  SubgraphBfs bfs(gi);
  bfs.run(require_local(gi, v));
  std::vector<std::uint32_t> nodes, parents;
  bfs.boundary(nodes, parents);
  return score_boundary(g, gi, nodes, parents).wbnd;
}

std::uint64_t bnd(const Graph& g, const InfectionSubgraph& gi, NodeId v) {
  SubgraphBfs bfs(gi);
  bfs.run(require_local(gi, v));
  std::vector<std::uint32_t> nodes, parents;
  bfs.boundary(nodes, parents);
  return score_boundary(g, gi, nodes, parents).bnd;
}

std::size_t LocalizationResult::rank_of(NodeId v) const {
  auto it = std::find(ranking.begin(), ranking.end(), v);
  return it == ranking.end() ? 0 : static_cast<std::size_t>(it - ranking.begin()) + 1;
}

LocalizationResult sft_estimate(const Graph& g, const Snapshot& snapshot, TieBreak mode, SftOptions options) {
  const InfectionSubgraph gi(g, snapshot.infected);
  const std::size_t k = gi.size();
  SubgraphBfs bfs(gi);
  std::vector<std::uint32_t> ecc(k, kUnreachable);
  std::vector<double> score(k, 0.0);
  std::vector<std::uint8_t> scored(k, 0);
  std::vector<std::uint32_t> nodes, parents;

  std::uint32_t best = kUnreachable;
  for (std::uint32_t v = 0; v < k; ++v) {
    ecc[v] = bfs.run(v, options.early_exit ? best : kUnreachable);
    if (ecc[v] == kUnreachable) continue;
    best = std::min(best, ecc[v]);
    if (options.early_exit && ecc[v] > best) continue;
    bfs.boundary(nodes, parents);
    const BoundaryScores s = score_boundary(g, gi, nodes, parents);
    score[v] = mode == TieBreak::kWbnd ? s.wbnd : static_cast<double>(s.bnd);
    scored[v] = 1;
  }

  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  auto in_play = [&](std::uint32_t v) { return !options.early_exit || ecc[v] == best; };
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const bool pa = in_play(a), pb = in_play(b);
    if (pa != pb) return pa;
    if (!pa) return a < b;
    if (ecc[a] != ecc[b]) return ecc[a] < ecc[b];
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });

  LocalizationResult result;
  result.algorithm = mode == TieBreak::kWbnd ? Algorithm::kSftWbnd : Algorithm::kSftBnd;
  result.ranking.reserve(k);
  result.scores.reserve(k);
  for (std::uint32_t v : order) {
    const NodeId id = gi.global(v);
    result.ranking.push_back(id);
    NodeScore ns{id, std::nullopt, score[v]};
    if (in_play(v) && scored[v]) ns.eccentricity = ecc[v];
    result.scores.push_back(ns);
  }
  result.estimator = result.ranking.front();
  return result;
}

}  // namespace sft
