#include "sft/diffusion.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sft/error.hpp"

namespace sft {

bool Snapshot::is_infected(NodeId v) const {
  return std::binary_search(infected.begin(), infected.end(), v);
}

std::vector<std::uint8_t> Snapshot::infected_mask() const {
  std::vector<std::uint8_t> mask(node_count, 0);
  for (NodeId v : infected) mask[v] = 1;
  return mask;
}

void validate_snapshot(const Graph& g, const Snapshot& s) {
  if (s.node_count != g.node_count()) {
    throw Error(ErrorCode::kInvalidArgument, "snapshot has " + std::to_string(s.node_count) +
                                                 " nodes but graph has " + std::to_string(g.node_count()));
  }
  if (s.infected.empty()) throw Error(ErrorCode::kInvalidArgument, "snapshot has no infected nodes");
  for (std::size_t i = 0; i < s.infected.size(); ++i) {
    if (s.infected[i] >= g.node_count()) {
      throw Error(ErrorCode::kNodeOutOfRange, "infected node " + std::to_string(s.infected[i]) + " not in graph");
    }
    if (i > 0 && s.infected[i] <= s.infected[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "infected list must be strictly ascending");
    }
  }

  const auto mask = s.infected_mask();
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  std::vector<NodeId> stack{s.infected.front()};
  seen[s.infected.front()] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    ++reached;
    for (const Neighbor& nb : g.neighbors(u)) {
      if (mask[nb.node] && !seen[nb.node]) {
        seen[nb.node] = 1;
        stack.push_back(nb.node);
      }
    }
  }
  if (reached != s.infected.size()) {
    throw Error(ErrorCode::kDisconnectedInfection, "infected nodes do not form one connected component");
  }

  if (!s.truth) return;
  const SnapshotTruth& truth = *s.truth;
  if (truth.infection_time.size() != s.infected.size()) {
    throw Error(ErrorCode::kInvalidArgument, "infection_time must have one entry per infected node");
  }
  if (!s.is_infected(truth.source)) throw Error(ErrorCode::kInvalidArgument, "source is not infected");
  std::vector<std::uint32_t> time(g.node_count(), kUnreachable);
  for (std::size_t i = 0; i < s.infected.size(); ++i) time[s.infected[i]] = truth.infection_time[i];
  if (time[truth.source] != 0) throw Error(ErrorCode::kInvalidArgument, "source infection time must be 0");
  for (NodeId v : s.infected) {
    if (time[v] > truth.obs_time) {
      throw Error(ErrorCode::kInvalidArgument, "node " + std::to_string(v) + " infected after the observation time");
    }
    if (v == truth.source) continue;
    if (time[v] == 0) throw Error(ErrorCode::kInvalidArgument, "only the source may be infected at time 0");
    const auto& nbs = g.neighbors(v);
    const bool has_infector = std::any_of(nbs.begin(), nbs.end(), [&](const Neighbor& nb) {
      return time[nb.node] != kUnreachable && time[nb.node] + 1 == time[v];
    });
    if (!has_infector) {
      throw Error(ErrorCode::kInvalidArgument,
                  "node " + std::to_string(v) + " has no neighbor infected one slot earlier");
    }
  }
}

IcSimulation::IcSimulation(const Graph& g, NodeId source, Rng& rng)
    : g_(g), rng_(rng), source_(source), infection_time_(g.node_count(), kUnreachable),
      attempted_(g.edge_count(), 0) {
  if (!g.contains(source)) {
    throw Error(ErrorCode::kNodeOutOfRange, "source " + std::to_string(source) + " not in graph");
  }
  infection_time_[source] = 0;
  order_.push_back(source);
}

void IcSimulation::step() {
  const std::size_t end = order_.size();
  for (std::size_t i = frontier_begin_; i < end; ++i) {
    const NodeId u = order_[i];
    for (const Neighbor& nb : g_.neighbors(u)) {
      if (infection_time_[nb.node] != kUnreachable) continue;
      const std::uint8_t bit = u < nb.node ? 1 : 2;
      if (attempted_[nb.edge] & bit) continue;
      attempted_[nb.edge] |= bit;
      if (rng_.bernoulli(nb.q)) {
        infection_time_[nb.node] = time_ + 1;
        order_.push_back(nb.node);
      }
    }
  }
  frontier_begin_ = end;
  ++time_;
}

void IcSimulation::run(std::uint32_t slots) {
  for (std::uint32_t k = 0; k < slots; ++k) step();
}

Snapshot IcSimulation::snapshot() const {
  Snapshot s;
  s.node_count = g_.node_count();
  s.infected = order_;
  std::sort(s.infected.begin(), s.infected.end());
  SnapshotTruth truth;
  truth.source = source_;
  truth.obs_time = time_;
  truth.infection_time.reserve(s.infected.size());
  for (NodeId v : s.infected) truth.infection_time.push_back(infection_time_[v]);
  s.truth = std::move(truth);
  return s;
}

Snapshot simulate_ic(const Graph& g, NodeId source, std::uint32_t t, Rng& rng) {
  IcSimulation sim(g, source, rng);
  sim.run(t);
  return sim.snapshot();
}

std::size_t LiveEdgeGraph::live_count() const {
  return static_cast<std::size_t>(std::count(live.begin(), live.end(), std::uint8_t{1}));
}

LiveEdgeGraph sample_live_edge(const Graph& g, Rng& rng) {
  LiveEdgeGraph le;
  le.live.reserve(g.edge_count());
  for (const Edge& e : g.edges()) le.live.push_back(rng.bernoulli(e.q) ? 1 : 0);
  return le;
}

Snapshot snapshot_from_live_edge(const Graph& g, const LiveEdgeGraph& le, NodeId source, std::uint32_t t) {
  if (!g.contains(source)) {
    throw Error(ErrorCode::kNodeOutOfRange, "source " + std::to_string(source) + " not in graph");
  }
  if (le.live.size() != g.edge_count()) {
    throw Error(ErrorCode::kInvalidArgument, "live-edge sample does not match the graph");
  }
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    if (dist[u] == t) continue;
    for (const Neighbor& nb : g.neighbors(u)) {
      if (le.live[nb.edge] && dist[nb.node] == kUnreachable) {
        dist[nb.node] = dist[u] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  Snapshot s;
  s.node_count = g.node_count();
  s.infected = std::move(queue);
  std::sort(s.infected.begin(), s.infected.end());
  SnapshotTruth truth{source, t, {}};
  for (NodeId v : s.infected) truth.infection_time.push_back(dist[v]);
  s.truth = std::move(truth);
  return s;
}

namespace {

void check_window(SizeWindow window, std::size_t max_attempts) {
  if (!(window.lower >= 0.0 && window.lower <= window.upper)) {
    throw Error(ErrorCode::kInvalidRange, "size window lower bound must be in [0, upper]");
  }
  if (max_attempts == 0) throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
}

bool within(double size, SizeWindow window) { return size >= window.lower && size <= window.upper; }

std::string window_text(SizeWindow window) {
  return "[" + std::to_string(window.lower) + ", " + std::to_string(window.upper) + "]";
}

}  // namespace

Snapshot sample_snapshot_window(const Graph& g, SizeWindow window, std::size_t max_attempts, Rng& rng) {
  check_window(window, max_attempts);
  if (g.node_count() == 0) throw Error(ErrorCode::kWindowUnreachable, "graph has no nodes");
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    const auto source = static_cast<NodeId>(rng.uniform_index(g.node_count()));
    IcSimulation sim(g, source, rng);
    while (static_cast<double>(sim.infected_count()) < window.lower && !sim.extinct()) sim.step();
    if (within(static_cast<double>(sim.infected_count()), window)) return sim.snapshot();
  }
  throw Error(ErrorCode::kWindowUnreachable,
              "no cascade landed in " + window_text(window) + " after " + std::to_string(max_attempts) + " attempts");
}

GraphSnapshot sample_binomial_tree_snapshot(unsigned m, double beta, double q_lo, double q_hi, SizeWindow window,
                                            std::size_t node_budget, std::size_t max_attempts, Rng& rng) {
  check_window(window, max_attempts);
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::kInvalidRange, "beta outside [0, 1]");
  if (!(0.0 <= q_lo && q_lo <= q_hi && q_hi <= 1.0)) throw Error(ErrorCode::kInvalidRange, "bad weight interval");

  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    // Node 0 is the source; edges[k] joins node k + 1 to its parent.
    std::vector<Edge> edges;
    std::vector<std::vector<NodeId>> children(1);
    std::vector<std::uint32_t> time(1, 0);
    bool over_budget = false;
    auto expand = [&](NodeId v) {
      const unsigned k = rng.binomial(m, beta);
      for (unsigned c = 0; c < k; ++c) {
        const auto child = static_cast<NodeId>(time.size());
        double q;
        do {
          q = rng.uniform(q_lo, q_hi);
        } while (q == q_lo && q_lo < q_hi);
        edges.push_back({v, child, q});
        children.emplace_back();
        children[v].push_back(child);
        time.push_back(kUnreachable);
      }
      if (time.size() > node_budget) over_budget = true;
    };

    std::vector<NodeId> infected{0};
    expand(0);
    std::size_t frontier_begin = 0;
    std::uint32_t now = 0;
    while (static_cast<double>(infected.size()) < window.lower && frontier_begin < infected.size() &&
           !over_budget) {
      const std::size_t end = infected.size();
      for (std::size_t i = frontier_begin; i < end && !over_budget; ++i) {
        // The parent of a frontier node is already infected; only children can be tried.
        // expand() grows `children`, so index instead of holding a reference.
        const NodeId u = infected[i];
        for (std::size_t c = 0; c < children[u].size(); ++c) {
          const NodeId child = children[u][c];
          if (rng.bernoulli(edges[child - 1].q)) {
            time[child] = now + 1;
            infected.push_back(child);
            expand(child);
          }
        }
      }
      frontier_begin = end;
      ++now;
    }
    if (over_budget || !within(static_cast<double>(infected.size()), window)) continue;

    const std::size_t n = time.size();
    std::vector<NodeId> relabel(n);
    std::iota(relabel.begin(), relabel.end(), NodeId{0});
    rng.shuffle(relabel.begin(), relabel.end());
    for (Edge& e : edges) e = {relabel[e.u], relabel[e.v], e.q};

    GraphSnapshot out{build_graph(n, std::move(edges)), {}};
    Snapshot& s = out.snapshot;
    s.node_count = n;
    std::vector<std::uint32_t> new_time(n, kUnreachable);
    for (NodeId v : infected) {
      s.infected.push_back(relabel[v]);
      new_time[relabel[v]] = time[v];
    }
    std::sort(s.infected.begin(), s.infected.end());
    SnapshotTruth truth{relabel[0], now, {}};
    for (NodeId v : s.infected) truth.infection_time.push_back(new_time[v]);
    s.truth = std::move(truth);
    return out;
  }
  throw Error(ErrorCode::kWindowUnreachable, "no binomial-tree cascade landed in " + window_text(window) +
                                                 " after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace sft
