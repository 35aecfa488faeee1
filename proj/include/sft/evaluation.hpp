#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sft/diffusion.hpp"
#include "sft/graph.hpp"
#include "sft/localization.hpp"

namespace sft {

// Outcome of running one algorithm on one snapshot.
struct TrialRecord {
  Algorithm algorithm = Algorithm::kSftBnd;
  std::size_t trial = 0;        // global index: size_index * samples + sample
  std::size_t target_size = 0;  // x the snapshot was drawn for (0 when not sized)
  NodeId source = 0;
  NodeId estimator = 0;
  std::size_t rank = 0;         // 1-based position of the source in the ranking
  std::uint32_t distance = 0;   // hops from estimator to source in g
  std::size_t infected = 0;
  std::uint32_t obs_time = 0;
  double seconds = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// Fraction of records whose estimator is the source. Throws kEmptyRecords.
double detection_rate(std::span<const TrialRecord> records);

// Fraction of records whose source ranks within the top ceil(gamma/100 * |I|).
// gamma is a percentage in (0, 100].
double gamma_accuracy(std::span<const TrialRecord> records, double gamma);

double mean_distance(std::span<const TrialRecord> records);

std::uint32_t hop_distance(const Graph& g, NodeId a, NodeId b);

// Fills the record fields derivable from a localization result.
TrialRecord score_trial(const Graph& g, const Snapshot& snapshot, const LocalizationResult& result);

/// Prior over the observation time: a nonincreasing pmf on t >= 0.
class TimePrior {
 public:
  // Pr(t) = (1 - r) r^t.
  static TimePrior geometric(double ratio);
  // Finite support 0..pmf.size()-1. Must sum to 1 (within 1e-9) and be nonincreasing.
  static TimePrior from_pmf(std::vector<double> pmf);

  double mass(std::uint32_t t) const;
  // Pr(T > t).
  double tail_after(std::uint32_t t) const;
  // Pr(a <= T < b); b == kUnreachable means no upper limit.
  double interval(std::uint32_t a, std::uint32_t b) const;

 private:
  TimePrior() = default;
  double ratio_ = 0.0;
  std::vector<double> pmf_;
  std::vector<double> tail_;  // tail_[t] = Pr(T > t) for finite pmfs
};

struct MapResult {
  std::vector<NodeId> argmax;       // ascending
  std::vector<NodeId> candidates;   // the infected nodes, ascending
  std::vector<double> posterior;    // normalized over candidates
};

inline constexpr std::size_t kMapMaxEdges = 12;
inline constexpr double kMapTieTolerance = 1e-9;

/// Exact MAP source set on a small tree under a uniform source prior.
///
/// Enumerates all 2^|E| live-edge subgraphs; a subgraph is consistent with
/// source v and time t when every infected node is within t live hops of v
/// and every healthy node is farther. Posterior(v) is proportional to
/// sum over subgraphs of Pr(subgraph) * Pr(T in the consistent range). Nodes
/// within kMapTieTolerance (relative) of the maximum form the argmax set.
/// Throws kNotATree or kTooLarge (> kMapMaxEdges edges).
MapResult map_bruteforce(const Graph& tree, const Snapshot& snapshot, const TimePrior& prior);

// Observation time beyond which the whole ER graph is infected:
// ceil(ln n / (ln mu + ln q)) + 2. Throws kInvalidRegime when mu * q <= 1.
std::uint32_t compute_t_u(double n, double mu, double q);

// Fraction of leaves (nodes without children) in the BFS tree of g_i rooted
// at source, parents chosen as the smallest-id candidate.
double leaf_fraction(const InfectionSubgraph& gi, NodeId source);

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal-approximation half width
};

// Rate estimate with CI for k successes out of n.
Estimate rate_estimate(std::size_t successes, std::size_t n);

struct SummaryRow {
  Algorithm algorithm;
  std::size_t target_size;
  std::size_t trials;
  Estimate detection;
  Estimate distance;
  std::vector<Estimate> gamma;  // aligned with the gamma list passed in
};

// Groups by (target_size, algorithm) in ascending order. Throws kEmptyRecords.
std::vector<SummaryRow> summarize(std::span<const TrialRecord> records, std::span<const double> gammas);

// Header: algorithm,trial,source,estimator,rank,distance,infected,obs_time,seconds
void write_records_csv(std::span<const TrialRecord> records, std::ostream& out);
void write_summary_csv(std::span<const SummaryRow> rows, std::span<const double> gammas, std::ostream& out);

}  // namespace sft
