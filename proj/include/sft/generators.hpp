#pragma once

#include <cstddef>

#include "sft/graph.hpp"
#include "sft/rng.hpp"

namespace sft {

// G(n, p): every unordered pair wired independently with probability p.
// Edge weights are left at 1.0; use assign_weights for infection probabilities.
Graph gen_er(std::size_t n, double p, Rng& rng);

// Tree grown breadth-first from node 0 where each expanded node draws
// Bi(m, beta) children. Growth stops once node_budget nodes exist; children
// that would exceed the budget are dropped. Weights are 1.0.
Graph gen_binomial_tree(unsigned m, double beta, std::size_t node_budget, Rng& rng);

// Redraws every edge's probability iid uniform on (lo, hi). Throws
// kInvalidRange unless 0 <= lo <= hi <= 1.
Graph assign_weights(const Graph& g, double lo, double hi, Rng& rng);

}  // namespace sft
