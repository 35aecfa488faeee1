#include "sft/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <tuple>

#include "sft/error.hpp"

namespace sft {

namespace {

void require_records(std::span<const TrialRecord> records) {
  if (records.empty()) throw Error(ErrorCode::kEmptyRecords, "no trial records");
}

}  // namespace

double detection_rate(std::span<const TrialRecord> records) {
  require_records(records);
  const auto hits = std::count_if(records.begin(), records.end(), [](const TrialRecord& r) { return r.distance == 0; });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double gamma_accuracy(std::span<const TrialRecord> records, double gamma) {
  require_records(records);
  if (!(gamma > 0.0 && gamma <= 100.0)) throw Error(ErrorCode::kInvalidRange, "gamma must be in (0, 100]");
  std::size_t hits = 0;
  for (const TrialRecord& r : records) {
    // Guard against 0.1 * 100 style representation error before taking the ceiling.
    const double cut = gamma / 100.0 * static_cast<double>(r.infected);
    const double nearest = std::round(cut);
    const auto top = static_cast<std::size_t>(std::abs(cut - nearest) < 1e-9 ? nearest : std::ceil(cut));
    if (r.rank >= 1 && r.rank <= top) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double mean_distance(std::span<const TrialRecord> records) {
  require_records(records);
  double sum = 0.0;
  for (const TrialRecord& r : records) sum += r.distance;
  return sum / static_cast<double>(records.size());
}

std::uint32_t hop_distance(const Graph& g, NodeId a, NodeId b) {
  if (!g.contains(b)) throw Error(ErrorCode::kNodeOutOfRange, "node " + std::to_string(b) + " not in graph");
  return bfs_distances(g, a)[b];
}

TrialRecord score_trial(const Graph& g, const Snapshot& snapshot, const LocalizationResult& result) {
  if (!snapshot.truth) throw Error(ErrorCode::kInvalidArgument, "snapshot has no ground truth to score against");
  TrialRecord r;
  r.algorithm = result.algorithm;
  r.source = snapshot.truth->source;
  r.estimator = result.estimator;
  r.rank = result.rank_of(r.source);
  r.distance = hop_distance(g, r.estimator, r.source);
  r.infected = snapshot.infected_count();
  r.obs_time = snapshot.truth->obs_time;
  return r;
}

TimePrior TimePrior::geometric(double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw Error(ErrorCode::kInvalidRange, "geometric ratio must be in [0, 1)");
  TimePrior p;
  p.ratio_ = ratio;
  return p;
}

TimePrior TimePrior::from_pmf(std::vector<double> pmf) {
  if (pmf.empty()) throw Error(ErrorCode::kInvalidArgument, "empty time prior");
  double sum = 0.0;
  for (std::size_t t = 0; t < pmf.size(); ++t) {
    if (pmf[t] < 0.0) throw Error(ErrorCode::kInvalidRange, "negative probability in time prior");
    if (t > 0 && pmf[t] > pmf[t - 1]) throw Error(ErrorCode::kInvalidArgument, "time prior must be nonincreasing");
    sum += pmf[t];
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::kInvalidArgument, "time prior must sum to 1");
  TimePrior p;
  p.pmf_ = std::move(pmf);
  p.tail_.resize(p.pmf_.size());
  double tail = 0.0;
  for (std::size_t t = p.pmf_.size(); t-- > 0;) {
    p.tail_[t] = tail;
    tail += p.pmf_[t];
  }
  return p;
}

double TimePrior::mass(std::uint32_t t) const {
  if (pmf_.empty()) return (1.0 - ratio_) * std::pow(ratio_, t);
  return t < pmf_.size() ? pmf_[t] : 0.0;
}

double TimePrior::tail_after(std::uint32_t t) const {
  if (pmf_.empty()) return std::pow(ratio_, static_cast<double>(t) + 1.0);
  return t < tail_.size() ? tail_[t] : 0.0;
}

double TimePrior::interval(std::uint32_t a, std::uint32_t b) const {
  if (b != kUnreachable && b <= a) return 0.0;
  const double from = a == 0 ? 1.0 : tail_after(a - 1);
  const double to = b == kUnreachable ? 0.0 : tail_after(b - 1);
  return std::max(0.0, from - to);
}

MapResult map_bruteforce(const Graph& tree, const Snapshot& snapshot, const TimePrior& prior) {
  const std::size_t n = tree.node_count();
  const std::size_t m = tree.edge_count();
  if (m > kMapMaxEdges) {
    throw Error(ErrorCode::kTooLarge, std::to_string(m) + " edges exceeds the enumeration cap of " +
                                          std::to_string(kMapMaxEdges));
  }
  if (n == 0 || m != n - 1) throw Error(ErrorCode::kNotATree, "edge count must be node count - 1");
  {
    const DistanceMap d = bfs_distances(tree, 0);
    if (std::find(d.begin(), d.end(), kUnreachable) != d.end()) throw Error(ErrorCode::kNotATree, "graph is disconnected");
  }
  if (snapshot.node_count != n || snapshot.infected.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "snapshot does not match the tree");
  }
  const auto infected = snapshot.infected_mask();

  MapResult out;
  out.candidates = snapshot.infected;
  out.posterior.assign(out.candidates.size(), 0.0);

  std::vector<std::uint32_t> dist(n);
  std::vector<NodeId> queue;
  const auto edges = tree.edges();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double weight = 1.0;
    for (std::size_t e = 0; e < m; ++e) weight *= (mask >> e) & 1 ? edges[e].q : 1.0 - edges[e].q;
    if (weight == 0.0) continue;

    for (std::size_t c = 0; c < out.candidates.size(); ++c) {
      std::fill(dist.begin(), dist.end(), kUnreachable);
      queue.assign(1, out.candidates[c]);
      dist[out.candidates[c]] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        for (const Neighbor& nb : tree.neighbors(u)) {
          if ((mask >> nb.edge) & 1 && dist[nb.node] == kUnreachable) {
            dist[nb.node] = dist[u] + 1;
            queue.push_back(nb.node);
          }
        }
      }
      std::uint32_t earliest = 0;         // every infected node reached by then
      std::uint32_t first_healthy = kUnreachable;
      bool feasible = true;
      for (NodeId v = 0; v < n; ++v) {
        if (infected[v]) {
          if (dist[v] == kUnreachable) {
            feasible = false;
            break;
          }
          earliest = std::max(earliest, dist[v]);
        } else {
          first_healthy = std::min(first_healthy, dist[v]);
        }
      }
      if (feasible) out.posterior[c] += weight * prior.interval(earliest, first_healthy);
    }
  }

  double total = 0.0;
  for (double p : out.posterior) total += p;
  if (total <= 0.0) throw Error(ErrorCode::kInvalidArgument, "snapshot has zero likelihood under every source");
  for (double& p : out.posterior) p /= total;
  const double best = *std::max_element(out.posterior.begin(), out.posterior.end());
  for (std::size_t c = 0; c < out.candidates.size(); ++c) {
    if (out.posterior[c] >= best * (1.0 - kMapTieTolerance)) out.argmax.push_back(out.candidates[c]);
  }
  return out;
}

std::uint32_t compute_t_u(double n, double mu, double q) {
  if (!(n >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (!(mu > 0.0 && q > 0.0) || !(mu * q > 1.0)) {
    throw Error(ErrorCode::kInvalidRegime, "threshold needs mu * q > 1");
  }
  const double ratio = std::log(n) / (std::log(mu) + std::log(q));
  const double nearest = std::round(ratio);
  const double steps = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::ceil(ratio);
  return static_cast<std::uint32_t>(steps) + 2;
}

double leaf_fraction(const InfectionSubgraph& gi, NodeId source) {
  if (!gi.contains(source)) throw Error(ErrorCode::kInvalidArgument, "source is not infected");
  const auto dist = gi.distances_from(gi.local(source));
  std::vector<std::uint32_t> children(gi.size(), 0);
  for (std::uint32_t v = 0; v < gi.size(); ++v) {
    if (dist[v] == 0) continue;
    for (std::uint32_t w : gi.neighbors(v)) {
      if (dist[w] + 1 == dist[v]) {
        ++children[w];
        break;
      }
    }
  }
  const auto leaves = std::count(children.begin(), children.end(), 0u);
  return static_cast<double>(leaves) / static_cast<double>(gi.size());
}

Estimate rate_estimate(std::size_t successes, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kEmptyRecords, "no trials");
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  return {p, 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

std::vector<SummaryRow> summarize(std::span<const TrialRecord> records, std::span<const double> gammas) {
  require_records(records);
  std::map<std::pair<std::size_t, int>, std::vector<TrialRecord>> groups;
  for (const TrialRecord& r : records) groups[{r.target_size, static_cast<int>(r.algorithm)}].push_back(r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    SummaryRow row;
    row.algorithm = static_cast<Algorithm>(key.second);
    row.target_size = key.first;
    row.trials = group.size();
    const auto n = static_cast<double>(group.size());
    const auto hits = std::count_if(group.begin(), group.end(), [](const TrialRecord& r) { return r.distance == 0; });
    row.detection = rate_estimate(static_cast<std::size_t>(hits), group.size());
    const double mean = mean_distance(group);
    double ss = 0.0;
    for (const TrialRecord& r : group) ss += (r.distance - mean) * (r.distance - mean);
    const double sd = group.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    row.distance = {mean, 1.96 * sd / std::sqrt(n)};
    for (double gamma : gammas) {
      const double acc = gamma_accuracy(group, gamma);
      row.gamma.push_back({acc, 1.96 * std::sqrt(acc * (1.0 - acc) / n)});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string gamma_label(double gamma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", gamma);
  return buf;
}

}  // namespace

void write_records_csv(std::span<const TrialRecord> records, std::ostream& out) {
  out << "algorithm,trial,source,estimator,rank,distance,infected,obs_time,seconds\n";
  for (const TrialRecord& r : records) {
    out << to_string(r.algorithm) << ',' << r.trial << ',' << r.source << ',' << r.estimator << ',' << r.rank << ','
        << r.distance << ',' << r.infected << ',' << r.obs_time << ',' << fixed(r.seconds, 6) << '\n';
  }
}

void write_summary_csv(std::span<const SummaryRow> rows, std::span<const double> gammas, std::ostream& out) {
  out << "algorithm,size,trials,detection_rate,detection_ci,mean_distance,distance_ci";
  for (double g : gammas) out << ",gamma_" << gamma_label(g) << ",gamma_" << gamma_label(g) << "_ci";
  out << '\n';
  for (const SummaryRow& row : rows) {
    out << to_string(row.algorithm) << ',' << row.target_size << ',' << row.trials << ','
        << fixed(row.detection.mean, 6) << ',' << fixed(row.detection.half_width, 6) << ','
        << fixed(row.distance.mean, 6) << ',' << fixed(row.distance.half_width, 6);
    for (const Estimate& e : row.gamma) out << ',' << fixed(e.mean, 6) << ',' << fixed(e.half_width, 6);
    out << '\n';
  }
}

}  // namespace sft
