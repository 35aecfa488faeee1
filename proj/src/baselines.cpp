#include "sft/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sft/error.hpp"

namespace sft {

namespace {

LocalizationResult make_result(Algorithm algorithm, const InfectionSubgraph& gi, const std::vector<std::uint32_t>& order,
                               const std::vector<double>& score, const std::vector<std::uint32_t>* ecc = nullptr) {
  LocalizationResult result;
  result.algorithm = algorithm;
  for (std::uint32_t v : order) {
    result.ranking.push_back(gi.global(v));
    NodeScore ns{gi.global(v), std::nullopt, score[v]};
    if (ecc) ns.eccentricity = (*ecc)[v];
    result.scores.push_back(ns);
  }
  result.estimator = result.ranking.front();
  return result;
}

// Orders local ids by score descending, then id ascending.
std::vector<std::uint32_t> order_by_score(const std::vector<double>& score) {
  std::vector<std::uint32_t> order(score.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return score[a] != score[b] ? score[a] > score[b] : a < b;
  });
  return order;
}

}  // namespace

LocalizationResult ecce_estimate(const Graph& g, const Snapshot& snapshot, Rng& rng) {
  const InfectionSubgraph gi(g, snapshot.infected);
  const EccentricityTable table = eccentricities(gi);
  std::vector<std::uint32_t> order(gi.size());
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(order.begin(), order.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return table.ecc[a] < table.ecc[b]; });
  std::vector<double> score(table.ecc.begin(), table.ecc.end());
  return make_result(Algorithm::kEcce, gi, order, score, &table.ecc);
}

double rumor_centrality(const InfectionSubgraph& gi, NodeId v) {
  if (!gi.contains(v)) throw Error(ErrorCode::kInvalidArgument, "node " + std::to_string(v) + " is not infected");
  const std::size_t k = gi.size();
  const std::uint32_t root = gi.local(v);

  std::vector<std::uint32_t> dist(k, kUnreachable);
  std::vector<std::uint32_t> queue{root};
  queue.reserve(k);
  dist[root] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t u = queue[head];
    for (std::uint32_t w : gi.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }

  std::vector<double> subtree(k, 1.0);
  double log_sizes = 0.0;
  for (auto it = queue.rbegin(); it != queue.rend(); ++it) {
    const std::uint32_t u = *it;
    log_sizes += std::log(subtree[u]);
    if (u == root) continue;
    for (std::uint32_t w : gi.neighbors(u)) {
      if (dist[w] + 1 == dist[u]) {
        subtree[w] += subtree[u];
        break;
      }
    }
  }
  return std::lgamma(static_cast<double>(k) + 1.0) - log_sizes;
}

LocalizationResult rum_estimate(const Graph& g, const Snapshot& snapshot) {
  const InfectionSubgraph gi(g, snapshot.infected);
  std::vector<double> score(gi.size());
  for (std::uint32_t v = 0; v < gi.size(); ++v) score[v] = rumor_centrality(gi, gi.global(v));
  return make_result(Algorithm::kRum, gi, order_by_score(score), score);
}

LocalizationResult netsleuth_estimate(const Graph& g, const Snapshot& snapshot, PowerIterationSettings settings) {
  const InfectionSubgraph gi(g, snapshot.infected);
  const std::size_t k = gi.size();
  if (k == 1) return make_result(Algorithm::kNetsleuth, gi, {0}, {0.0});

  std::vector<double> degree(k);
  std::uint32_t hub = 0;
  for (std::uint32_t v = 0; v < k; ++v) {
    degree[v] = static_cast<double>(gi.neighbors(v).size());
    if (degree[v] > degree[hub]) hub = v;
  }
  // The top Laplacian eigenvalue is at least maxdeg + 1, so this shift keeps it
  // dominant in magnitude while shrinking the rest of the spectrum.
  const double shift = degree[hub] / 2.0;

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y, double sigma) {
    for (std::uint32_t v = 0; v < k; ++v) {
      double acc = (degree[v] - sigma) * x[v];
      for (std::uint32_t w : gi.neighbors(v)) acc -= x[w];
      y[v] = acc;
    }
  };
  auto normalize = [](std::vector<double>& x) {
    double norm = 0.0;
    for (double a : x) norm += a * a;
    norm = std::sqrt(norm);
    for (double& a : x) a /= norm;
    return norm;
  };

  // Seed concentrated on the hub, with a small ramp so the start is never
  // orthogonal to the dominant eigenspace.
  std::vector<double> x(k), y(k);
  for (std::uint32_t v = 0; v < k; ++v) x[v] = (v == hub ? 1.0 : 0.0) + 1e-3 * (v + 1.0) / static_cast<double>(k);
  normalize(x);

  bool converged = false;
  for (std::size_t it = 0; it < settings.max_iterations && !converged; ++it) {
    apply(x, y, shift);
    if (normalize(y) == 0.0) break;
    double change = 0.0;
    for (std::uint32_t v = 0; v < k; ++v) change = std::max(change, std::abs(y[v] - x[v]));
    converged = change < settings.tolerance;
    x.swap(y);
  }
  if (!converged) {
    throw Error(ErrorCode::kPowerIterationDiverged,
                "power iteration did not converge within " + std::to_string(settings.max_iterations) + " iterations");
  }

  std::uint32_t peak = 0;
  for (std::uint32_t v = 1; v < k; ++v) {
    if (std::abs(x[v]) > std::abs(x[peak])) peak = v;
  }
  if (x[peak] < 0) {
    for (double& a : x) a = -a;
  }
  return make_result(Algorithm::kNetsleuth, gi, order_by_score(x), x);
}

}  // namespace sft
