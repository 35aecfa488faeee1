#include <cmath>
#include <map>
#include <sstream>

#include "gtest/gtest.h"
#include "sft/diffusion.hpp"
#include "sft/error.hpp"
#include "sft/evaluation.hpp"
#include "sft/generators.hpp"
#include "test_support.hpp"

namespace sft {
namespace {

using testing::path_graph;
using testing::star_graph;

TrialRecord record(std::size_t rank, std::size_t infected, std::uint32_t distance = 0) {
  TrialRecord r;
  r.rank = rank;
  r.infected = infected;
  r.distance = distance;
  r.estimator = distance == 0 ? r.source : r.source + 1;
  return r;
}

Snapshot with_set(const Graph& g, std::vector<NodeId> infected) { return {g.node_count(), std::move(infected), std::nullopt}; }

// Pr(I_t = target | source) for t = 0..horizon by stepping the cascade as a
// Markov chain on (infected, newly infected) masks. Independent of the
// live-edge view.
std::vector<double> cascade_set_probability(const Graph& g, NodeId source, std::uint32_t target, std::uint32_t horizon) {
  const std::size_t n = g.node_count();
  using State = std::pair<std::uint32_t, std::uint32_t>;
  std::map<State, double> dist{{{1u << source, 1u << source}, 1.0}};
  std::vector<double> out;
  for (std::uint32_t t = 0; t <= horizon; ++t) {
    double p = 0.0;
    for (const auto& [state, mass] : dist)
      if (state.first == target) p += mass;
    out.push_back(p);

    std::map<State, double> next;
    for (const auto& [state, mass] : dist) {
      const auto [infected, frontier] = state;
      std::vector<NodeId> exposed;
      std::vector<double> hit;
      for (NodeId w = 0; w < n; ++w) {
        if ((infected >> w) & 1) continue;
        double miss = 1.0;
        for (const Neighbor& nb : g.neighbors(w))
          if ((frontier >> nb.node) & 1) miss *= 1.0 - nb.q;
        if (miss < 1.0) {
          exposed.push_back(w);
          hit.push_back(1.0 - miss);
        }
      }
      for (std::uint32_t pick = 0; pick < (1u << exposed.size()); ++pick) {
        double p_pick = mass;
        std::uint32_t fresh = 0;
        for (std::size_t i = 0; i < exposed.size(); ++i) {
          if ((pick >> i) & 1) {
            p_pick *= hit[i];
            fresh |= 1u << exposed[i];
          } else {
            p_pick *= 1.0 - hit[i];
          }
        }
        if (p_pick > 0.0) next[{infected | fresh, fresh}] += p_pick;
      }
    }
    dist = std::move(next);
  }
  return out;
}

std::vector<double> posterior_oracle(const Graph& g, const Snapshot& s, double ratio) {
  std::uint32_t target = 0;
  for (NodeId v : s.infected) target |= 1u << v;
  const std::uint32_t horizon = 60;
  std::vector<double> post;
  double total = 0.0;
  for (NodeId v : s.infected) {
    const auto pr = cascade_set_probability(g, v, target, horizon);
    double like = 0.0;
    for (std::uint32_t t = 0; t <= horizon; ++t) like += (1 - ratio) * std::pow(ratio, t) * pr[t];
    post.push_back(like);
    total += like;
  }
  for (double& p : post) p /= total;
  return post;
}

TEST(Metrics, DetectionRate) {
  std::vector<TrialRecord> hits(5, record(1, 10));
  EXPECT_EQ(detection_rate(hits), 1.0);
  std::vector<TrialRecord> misses(5, record(3, 10, 2));
  EXPECT_EQ(detection_rate(misses), 0.0);
  std::vector<TrialRecord> mixed(87, record(1, 10));
  mixed.insert(mixed.end(), 13, record(2, 10, 1));
  EXPECT_DOUBLE_EQ(detection_rate(mixed), 0.87);
  EXPECT_DOUBLE_EQ(mean_distance(mixed), 0.13);
  try {
    detection_rate({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyRecords);
  }
}

TEST(Metrics, GammaAccuracy) {
  const std::vector<TrialRecord> first{record(1, 100)};
  const std::vector<TrialRecord> second{record(2, 100, 1)};
  EXPECT_EQ(gamma_accuracy(first, 1), 1.0);
  EXPECT_EQ(gamma_accuracy(second, 1), 0.0);
  EXPECT_EQ(gamma_accuracy(second, 2), 1.0);
  EXPECT_EQ(gamma_accuracy(std::vector<TrialRecord>{record(100, 100, 3)}, 100), 1.0);
  // ceil(0.05 * 30) = 2.
  EXPECT_EQ(gamma_accuracy(std::vector<TrialRecord>{record(2, 30, 1)}, 5), 1.0);
  EXPECT_THROW(gamma_accuracy(first, 0), Error);
  EXPECT_THROW(gamma_accuracy(first, 101), Error);
  EXPECT_THROW(gamma_accuracy({}, 5), Error);
}

TEST(Metrics, GammaAccuracyIsMonotone) {
  Rng rng(3);
  std::vector<TrialRecord> records;
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng.uniform_index(500);
    const std::size_t rank = 1 + rng.uniform_index(std::min<std::size_t>(n, 20));
    records.push_back(record(rank, n, rank == 1 ? 0 : 1));
  }
  double prev = 0.0;
  for (double gamma = 0.5; gamma <= 100.0; gamma += 0.5) {
    const double acc = gamma_accuracy(records, gamma);
    EXPECT_GE(acc, prev);
    EXPECT_GE(acc, detection_rate(records));
    prev = acc;
  }
}

TEST(Metrics, HopDistance) {
  const Graph p5 = path_graph(5);
  EXPECT_EQ(hop_distance(p5, 3, 3), 0u);
  EXPECT_EQ(hop_distance(p5, 0, 4), 4u);
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = testing::random_connected_graph(20, 0.1, rng);
    const auto fw = testing::floyd_warshall(g);
    for (NodeId a = 0; a < 20; ++a)
      for (NodeId b = 0; b < 20; ++b) EXPECT_EQ(hop_distance(g, a, b), fw[a][b]);
  }
}

TEST(Metrics, ScoreTrial) {
  const Graph p5 = path_graph(5);
  Snapshot s{5, {0, 1, 2, 3, 4}, SnapshotTruth{1, 3, {1, 0, 1, 2, 3}}};
  LocalizationResult r{Algorithm::kRum, 2, {2, 1, 3, 0, 4}, {}};
  const TrialRecord rec = score_trial(p5, s, r);
  EXPECT_EQ(rec.algorithm, Algorithm::kRum);
  EXPECT_EQ(rec.source, 1u);
  EXPECT_EQ(rec.estimator, 2u);
  EXPECT_EQ(rec.rank, 2u);
  EXPECT_EQ(rec.distance, 1u);
  EXPECT_EQ(rec.infected, 5u);
  EXPECT_EQ(rec.obs_time, 3u);
  s.truth.reset();
  EXPECT_THROW(score_trial(p5, s, r), Error);
}

TEST(TimePrior, GeometricAndFinite) {
  const TimePrior g = TimePrior::geometric(0.5);
  EXPECT_DOUBLE_EQ(g.mass(0), 0.5);
  EXPECT_DOUBLE_EQ(g.mass(3), 0.0625);
  EXPECT_DOUBLE_EQ(g.tail_after(1), 0.25);
  EXPECT_DOUBLE_EQ(g.interval(1, 3), 0.375);
  EXPECT_DOUBLE_EQ(g.interval(2, kUnreachable), 0.25);

  const TimePrior f = TimePrior::from_pmf({0.5, 0.3, 0.2});
  EXPECT_DOUBLE_EQ(f.interval(1, kUnreachable), 0.5);
  EXPECT_EQ(f.mass(5), 0.0);
  EXPECT_THROW(TimePrior::from_pmf({0.2, 0.8}), Error);
  EXPECT_THROW(TimePrior::from_pmf({0.5, 0.4}), Error);
  EXPECT_THROW(TimePrior::geometric(1.0), Error);
}

TEST(MapBruteforce, Examples) {
  const TimePrior prior = TimePrior::geometric(0.5);

  const Graph p3 = path_graph(3);
  const MapResult r = map_bruteforce(p3, with_set(p3, {0, 1, 2}), prior);
  EXPECT_EQ(r.argmax, (std::vector<NodeId>{1}));
  EXPECT_NEAR(r.posterior[0], r.posterior[2], 1e-15);

  // Center with two of three leaves infected: likelihood 1/16 vs 1/32 per leaf.
  const Graph star = star_graph(3);
  const MapResult sr = map_bruteforce(star, with_set(star, {0, 1, 2}), prior);
  EXPECT_EQ(sr.argmax, (std::vector<NodeId>{0}));
  EXPECT_NEAR(sr.posterior[0], 0.5, 1e-12);
  EXPECT_NEAR(sr.posterior[1], 0.25, 1e-12);

  const Graph lone = build_graph(1, {});
  const MapResult lr = map_bruteforce(lone, with_set(lone, {0}), prior);
  EXPECT_EQ(lr.argmax, (std::vector<NodeId>{0}));
  EXPECT_DOUBLE_EQ(lr.posterior[0], 1.0);
}

TEST(MapBruteforce, Errors) {
  const TimePrior prior = TimePrior::geometric(0.5);
  const Graph c4 = testing::cycle_graph(4);
  const Snapshot s = with_set(c4, {0, 1});
  try {
    map_bruteforce(c4, s, prior);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotATree);
  }
  const Graph p14 = path_graph(14);
  try {
    map_bruteforce(p14, with_set(p14, {0, 1}), prior);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(MapBruteforce, MatchesMarkovChainPosterior) {
  Rng rng(5);
  const double ratio = 0.5;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(7);
    const Graph tree = testing::random_tree(n, rng);
    const Snapshot s = simulate_ic(tree, static_cast<NodeId>(rng.uniform_index(n)), rng.uniform_index(4), rng);
    const Snapshot bare = with_set(tree, s.infected);
    const MapResult r = map_bruteforce(tree, bare, TimePrior::geometric(ratio));
    const auto oracle = posterior_oracle(tree, bare, ratio);
    ASSERT_EQ(r.posterior.size(), oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(r.posterior[i], oracle[i], 1e-9);
  }
}

TEST(ComputeTu, Examples) {
  EXPECT_EQ(compute_t_u(5000, 10, 1), 6u);
  EXPECT_EQ(compute_t_u(2000, 200, 1), 4u);
  EXPECT_EQ(compute_t_u(5000, 20, 0.5), 6u);
  EXPECT_EQ(compute_t_u(5000, 30, 1), 5u);
  try {
    compute_t_u(100, 2, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidRegime);
  }
}

TEST(ComputeTu, LogBaseInvariant) {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const double n = std::floor(rng.uniform(10, 1e6));
    const double mu = rng.uniform(2, 300);
    const double q = rng.uniform(1.01 / mu, 1.0);
    const auto base2 = static_cast<std::uint32_t>(std::ceil(std::log2(n) / (std::log2(mu) + std::log2(q)) - 1e-9)) + 2;
    const auto base10 =
        static_cast<std::uint32_t>(std::ceil(std::log10(n) / (std::log10(mu) + std::log10(q)) - 1e-9)) + 2;
    EXPECT_EQ(base2, base10);
    EXPECT_EQ(compute_t_u(n, mu, q), base2);
  }
}

TEST(LeafFraction, Examples) {
  const Graph star = star_graph(6);
  const std::vector<NodeId> all_star{0, 1, 2, 3, 4, 5, 6};
  EXPECT_DOUBLE_EQ(leaf_fraction(InfectionSubgraph(star, all_star), 0), 6.0 / 7.0);
  const Graph p5 = path_graph(5);
  const std::vector<NodeId> all_path{0, 1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(leaf_fraction(InfectionSubgraph(p5, all_path), 2), 0.4);
  const std::vector<NodeId> one{3};
  EXPECT_DOUBLE_EQ(leaf_fraction(InfectionSubgraph(p5, one), 3), 1.0);
}

TEST(LeafFraction, MatchesZeroChildRecount) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(30);
    const Graph g = testing::random_connected_graph(n, rng.uniform(0.0, 0.3), rng);
    std::vector<NodeId> all(n);
    for (NodeId v = 0; v < n; ++v) all[v] = v;
    const NodeId source = static_cast<NodeId>(rng.uniform_index(n));
    const auto fw = testing::floyd_warshall(g);
    std::vector<std::uint8_t> has_child(n, 0);
    for (NodeId u = 0; u < n; ++u) {
      if (u == source) continue;
      for (const Neighbor& nb : g.neighbors(u)) {
        if (fw[source][nb.node] + 1 == fw[source][u]) {
          has_child[nb.node] = 1;  // neighbors are sorted: first hit is the min-id parent
          break;
        }
      }
    }
    const double expected = static_cast<double>(std::count(has_child.begin(), has_child.end(), 0)) / static_cast<double>(n);
    EXPECT_DOUBLE_EQ(leaf_fraction(InfectionSubgraph(g, all), source), expected);
  }
}

TEST(Summarize, SingleRecordAndEmpty) {
  TrialRecord r = record(1, 50);
  r.target_size = 50;
  const std::vector<TrialRecord> one{r};
  const std::vector<double> gammas{1, 5};
  const auto rows = summarize(one, gammas);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].trials, 1u);
  EXPECT_EQ(rows[0].detection.mean, 1.0);
  EXPECT_EQ(rows[0].detection.half_width, 0.0);
  EXPECT_EQ(rows[0].distance.half_width, 0.0);
  ASSERT_EQ(rows[0].gamma.size(), 2u);
  try {
    summarize({}, gammas);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyRecords);
  }
}

TEST(Summarize, GroupsBySizeThenAlgorithm) {
  std::vector<TrialRecord> records;
  for (std::size_t size : {200u, 100u})
    for (Algorithm a : {Algorithm::kRum, Algorithm::kSftWbnd})
      for (int i = 0; i < 3; ++i) {
        TrialRecord r = record(1, size, i == 0 ? 1 : 0);
        r.algorithm = a;
        r.target_size = size;
        records.push_back(r);
      }
  const std::vector<double> gammas{10};
  const auto rows = summarize(records, gammas);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].target_size, 100u);
  EXPECT_EQ(rows[0].algorithm, Algorithm::kSftWbnd);
  EXPECT_EQ(rows[1].algorithm, Algorithm::kRum);
  EXPECT_EQ(rows[2].target_size, 200u);
  EXPECT_NEAR(rows[0].detection.mean, 2.0 / 3.0, 1e-12);

  std::ostringstream out;
  write_summary_csv(rows, gammas, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "algorithm,size,trials,detection_rate,detection_ci,mean_distance,distance_ci,gamma_10,gamma_10_ci");
}

TEST(Summarize, BernoulliIntervalCoverage) {
  Rng rng(8);
  const int meta = 1000;
  int covered = 0;
  for (int m = 0; m < meta; ++m) {
    std::size_t k = 0;
    for (int i = 0; i < 400; ++i) k += rng.bernoulli(0.5) ? 1 : 0;
    const Estimate e = rate_estimate(k, 400);
    covered += std::abs(e.mean - 0.5) <= e.half_width ? 1 : 0;
  }
  EXPECT_GE(covered, static_cast<int>(0.9 * meta));
}

TEST(RecordsCsv, Header) {
  std::ostringstream out;
  write_records_csv({}, out);
  EXPECT_EQ(out.str(), "algorithm,trial,source,estimator,rank,distance,infected,obs_time,seconds\n");
}

}  // namespace
}  // namespace sft
