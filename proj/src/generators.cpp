#include "sft/generators.hpp"

#include <string>
#include <vector>

#include "sft/error.hpp"

namespace sft {

Graph gen_er(std::size_t n, double p, Rng& rng) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "ER graph needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidRange, "wiring probability outside [0, 1]");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 * 1.1) + 16);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.push_back({u, v, 1.0});
    }
  }
  return build_graph(n, std::move(edges));
}

Graph gen_binomial_tree(unsigned m, double beta, std::size_t node_budget, Rng& rng) {
  if (node_budget == 0) throw Error(ErrorCode::kInvalidArgument, "node budget must be >= 1");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::kInvalidRange, "beta outside [0, 1]");
  std::vector<Edge> edges;
  std::size_t nodes = 1;
  for (NodeId parent = 0; parent < nodes && nodes < node_budget; ++parent) {
    const unsigned children = rng.binomial(m, beta);
    for (unsigned c = 0; c < children && nodes < node_budget; ++c) {
      edges.push_back({parent, static_cast<NodeId>(nodes), 1.0});
      ++nodes;
    }
  }
  return build_graph(nodes, std::move(edges));
}

Graph assign_weights(const Graph& g, double lo, double hi, Rng& rng) {
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
    throw Error(ErrorCode::kInvalidRange,
                "weight interval (" + std::to_string(lo) + ", " + std::to_string(hi) + ") is not within [0, 1]");
  }
  std::vector<double> q(g.edge_count());
  for (double& w : q) {
    do {
      w = rng.uniform(lo, hi);
    } while (w == lo && lo < hi);
  }
  return g.with_weights(q);
}

}  // namespace sft
