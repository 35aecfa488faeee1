#pragma once

#include "sft/diffusion.hpp"
#include "sft/graph.hpp"
#include "sft/localization.hpp"
#include "sft/rng.hpp"

namespace sft {

// Jordan center with ties broken uniformly at random. Ranking: eccentricity
// ascending, seeded shuffle within each eccentricity class.
LocalizationResult ecce_estimate(const Graph& g, const Snapshot& snapshot, Rng& rng);

// log of rumor centrality of v on the BFS tree of g_i rooted at v (smallest-id
// parents): log(|I|!) - sum over nodes of log(subtree size). Exact when g_i is
// a tree.
double rumor_centrality(const InfectionSubgraph& gi, NodeId v);

LocalizationResult rum_estimate(const Graph& g, const Snapshot& snapshot);

struct PowerIterationSettings {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10000;
};

// Dominant eigenvector of the Laplacian of g_i (degrees counted inside g_i),
// by power iteration on L - (maxdeg/2) I. The sign is fixed so the
// largest-magnitude entry is positive; nodes rank by entry, largest first.
// Throws kPowerIterationDiverged when the iteration does not settle.
LocalizationResult netsleuth_estimate(const Graph& g, const Snapshot& snapshot, PowerIterationSettings settings = {});

}  // namespace sft
