#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sft/graph.hpp"
#include "sft/rng.hpp"

namespace sft {

// Hidden ground truth of a simulated snapshot, used only for scoring.
struct SnapshotTruth {
  NodeId source = 0;
  std::uint32_t obs_time = 0;
  // Aligned with Snapshot::infected.
  std::vector<std::uint32_t> infection_time;

  friend bool operator==(const SnapshotTruth&, const SnapshotTruth&) = default;
};

/// Complete observation of a network at one instant: the infected set I, with
/// the healthy set implicit as every other node.
struct Snapshot {
  std::size_t node_count = 0;
  std::vector<NodeId> infected;  // strictly ascending
  std::optional<SnapshotTruth> truth;

  std::size_t infected_count() const noexcept { return infected.size(); }
  bool is_infected(NodeId v) const;
  std::vector<std::uint8_t> infected_mask() const;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

// Checks the structural invariants against g: ids in range and sorted, I
// connected in g, source infected at time 0, and every node infected at k > 0
// has a neighbor infected at k - 1. Throws sft::Error on the first violation.
void validate_snapshot(const Graph& g, const Snapshot& s);

/// Time-slotted independent cascade, resumable one slot at a time.
///
/// At each slot every node activated in the previous slot makes one attempt on
/// each still-inactive neighbor, succeeding with the edge's probability;
/// successes become active in the next slot. Each directed attempt is made at
/// most once.
class IcSimulation {
 public:
  IcSimulation(const Graph& g, NodeId source, Rng& rng);

  void step();
  void run(std::uint32_t slots);

  std::uint32_t time() const noexcept { return time_; }
  std::size_t infected_count() const noexcept { return order_.size(); }
  // No newly active nodes left: further steps cannot change the state.
  bool extinct() const noexcept { return frontier_begin_ == order_.size(); }

  Snapshot snapshot() const;

 private:
  const Graph& g_;
  Rng& rng_;
  NodeId source_;
  std::uint32_t time_ = 0;
  std::vector<std::uint32_t> infection_time_;  // kUnreachable while healthy
  std::vector<NodeId> order_;                  // nodes in activation order
  std::size_t frontier_begin_ = 0;             // order_[frontier_begin_..] activated last slot
  std::vector<std::uint8_t> attempted_;        // per edge: bit 0 = u->v tried, bit 1 = v->u tried
};

Snapshot simulate_ic(const Graph& g, NodeId source, std::uint32_t t, Rng& rng);

// Live-edge view of the cascade: every edge's coin flipped up front.
struct LiveEdgeGraph {
  std::vector<std::uint8_t> live;  // indexed by EdgeId
  std::size_t live_count() const;
};

LiveEdgeGraph sample_live_edge(const Graph& g, Rng& rng);

// Infected set = nodes within t live-edge hops of source; infection time is
// the live-edge hop distance.
Snapshot snapshot_from_live_edge(const Graph& g, const LiveEdgeGraph& le, NodeId source, std::uint32_t t);

// Acceptance window on the infected-set size, in absolute node counts.
struct SizeWindow {
  double lower;
  double upper;

  // [lo_factor * x, hi_factor * x]; the defaults are the usual [0.75x, 1.25x].
  static SizeWindow around(double x, double lo_factor = 0.75, double hi_factor = 1.25) {
    return {lo_factor * x, hi_factor * x};
  }
};

// Draws a uniform source, runs the cascade slot by slot and stops at the first
// slot where |I| >= window.lower. The draw is accepted when |I| <= window.upper
// and retried otherwise (also when the cascade dies out below the window).
// Throws kWindowUnreachable after max_attempts rejected draws.
Snapshot sample_snapshot_window(const Graph& g, SizeWindow window, std::size_t max_attempts, Rng& rng);

// A snapshot together with the graph it was drawn on.
struct GraphSnapshot {
  Graph graph;
  Snapshot snapshot;
};

// Cascade on an unbounded binomial tree (children ~ Bi(m, beta), edge
// probabilities ~ U(q_lo, q_hi)), grown lazily from the source: a node's
// children are drawn when it becomes infected. The returned graph holds every
// infected node plus all their children, relabelled by a random permutation so
// node ids carry no information about the source. Uses the same stopping rule
// as sample_snapshot_window; a draw whose tree would exceed node_budget nodes
// counts as rejected.
GraphSnapshot sample_binomial_tree_snapshot(unsigned m, double beta, double q_lo, double q_hi, SizeWindow window,
                                            std::size_t node_budget, std::size_t max_attempts, Rng& rng);

}  // namespace sft
