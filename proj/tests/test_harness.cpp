#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "sft/edge_list_io.hpp"
#include "sft/error.hpp"
#include "sft/harness.hpp"
#include "test_support.hpp"

namespace sft {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sft_harness_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

const char* kErConfig = R"({
  "graph": {"type": "er", "n": 600, "p": 0.01},
  "weights": {"lo": 0.2, "hi": 0.5},
  "sizes": [30, 60],
  "samples": 5,
  "master_seed": 17
})";

TEST(ParseConfig, DefaultsAndFields) {
  const ExperimentConfig cfg = parse_config(kErConfig);
  EXPECT_EQ(cfg.graph.kind, GraphSpec::Kind::kEr);
  EXPECT_EQ(cfg.graph.n, 600u);
  ASSERT_TRUE(cfg.weights.has_value());
  EXPECT_EQ(cfg.sizes, (std::vector<std::size_t>{30, 60}));
  EXPECT_EQ(cfg.algorithms.size(), 5u);
  EXPECT_EQ(cfg.gammas, (std::vector<double>{1, 5, 10}));
  EXPECT_EQ(cfg.window_lo, 0.75);
  EXPECT_EQ(cfg.window_hi, 1.25);
  EXPECT_EQ(cfg.workers, 1u);
}

TEST(ParseConfig, ErrorsNameTheField) {
  auto message_of = [](const std::string& text) -> std::string {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message_of(R"({"graph": {"type": "er", "n": 10}})").find("graph.p"), std::string::npos);
  EXPECT_NE(message_of(R"({"graph": {"type": "binomial", "m": 20, "beta": 0.5}})").find("weights"), std::string::npos);
  EXPECT_NE(message_of(R"({"graph": {"type": "er", "n": 10, "p": 0.1}, "algorithms": ["x"]})").find("algorithms"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"graph": {"type": "er", "n": 10, "p": 1.5}})").find("graph.p"), std::string::npos);
  EXPECT_NE(message_of(R"({"graph": {"type": "tree"}})").find("graph.type"), std::string::npos);
  EXPECT_NE(message_of(R"({"graph": {"type": "er", "n": 10, "p": 0.1}, "samples": "many"})").find("samples"),
            std::string::npos);
  EXPECT_THROW(parse_config("{not json"), Error);
}

TEST_F(HarnessTest, ZeroSamplesWritesHeaderOnly) {
  ExperimentConfig cfg = parse_config(kErConfig);
  cfg.samples = 0;
  cfg.records_path = dir_ / "records.csv";
  cfg.summary_path = dir_ / "summary.csv";
  const ExperimentOutput out = run_experiment(cfg);
  EXPECT_TRUE(out.records.empty());
  write_experiment_outputs(cfg, out);
  EXPECT_EQ(slurp(cfg.records_path), "algorithm,trial,source,estimator,rank,distance,infected,obs_time,seconds\n");
  const std::string summary = slurp(cfg.summary_path);
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 1);
}

TEST_F(HarnessTest, PathFileFullWindowIsComplete) {
  write_edge_list(testing::path_graph(5, 0.9), dir_ / "p5.tsv");
  std::ofstream(dir_ / "cfg.json") << R"({"graph": {"type": "file", "path": "p5.tsv"}, "sizes": [5], "samples": 6,
                                          "window": [1, 1], "master_seed": 3})";
  const ExperimentConfig cfg = load_config(dir_ / "cfg.json");
  const ExperimentOutput out = run_experiment(cfg);
  EXPECT_TRUE(out.failures.empty());
  ASSERT_EQ(out.records.size(), 6u * 5u);
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    const TrialRecord& r = out.records[i];
    EXPECT_EQ(r.trial, i / 5);
    EXPECT_EQ(static_cast<std::size_t>(r.algorithm), i % 5);
    EXPECT_EQ(r.infected, 5u);
    EXPECT_GE(r.rank, 1u);
    EXPECT_LE(r.rank, 5u);
  }
  // The SFT estimators agree with the unique path center.
  for (const TrialRecord& r : out.records) {
    if (r.algorithm == Algorithm::kSftBnd || r.algorithm == Algorithm::kSftWbnd) {
      EXPECT_EQ(r.estimator, 2u);
    }
  }
  // Every algorithm saw the same snapshot.
  for (std::size_t i = 0; i < out.records.size(); i += 5)
    for (std::size_t j = 1; j < 5; ++j) {
      EXPECT_EQ(out.records[i + j].source, out.records[i].source);
      EXPECT_EQ(out.records[i + j].obs_time, out.records[i].obs_time);
    }
}

TEST_F(HarnessTest, FailuresAreQuarantined) {
  write_edge_list(testing::path_graph(5, 0.5), dir_ / "p5.tsv");
  ExperimentConfig cfg = parse_config(R"({"graph": {"type": "file", "path": "p5.tsv"}, "sizes": [5, 40], "samples": 3,
                                          "max_attempts": 50, "algorithms": ["sft-bnd", "rum"]})",
                                      dir_);
  const ExperimentOutput out = run_experiment(cfg);
  EXPECT_EQ(out.failures.size(), 3u);
  for (const TrialFailure& f : out.failures) {
    EXPECT_EQ(f.target_size, 40u);
    EXPECT_FALSE(f.algorithm.has_value());
  }
  EXPECT_EQ(out.records.size() + 2 * out.failures.size(), 2u * 3u * 2u);
  std::ostringstream csv;
  write_failures_csv(out.failures, csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "trial,size,algorithm,error");
}

TEST_F(HarnessTest, OutputsAreByteIdenticalAcrossRunsAndWorkers) {
  std::vector<std::string> records, summaries;
  for (std::size_t workers : {1u, 3u, 1u, 4u}) {
    ExperimentConfig cfg = parse_config(kErConfig);
    cfg.workers = workers;
    const fs::path out_dir = dir_ / std::to_string(records.size());
    cfg.records_path = out_dir / "records.csv";
    cfg.summary_path = out_dir / "summary.csv";
    write_experiment_outputs(cfg, run_experiment(cfg));
    records.push_back(slurp(cfg.records_path));
    summaries.push_back(slurp(cfg.summary_path));
  }
  EXPECT_EQ(std::count(records[0].begin(), records[0].end(), '\n'), 1 + 2 * 5 * 5);
  for (std::size_t i = 1; i < records.size(); ++i) {
    EXPECT_EQ(records[i], records[0]);
    EXPECT_EQ(summaries[i], summaries[0]);
  }
  ExperimentConfig other = parse_config(kErConfig);
  other.master_seed = 18;
  std::ostringstream alt;
  write_records_csv(run_experiment(other).records, alt);
  EXPECT_NE(alt.str(), records[0]);
}

TEST_F(HarnessTest, BinomialConfigGrowsTreesPerTrial) {
  ExperimentConfig cfg = parse_config(R"({"graph": {"type": "binomial", "m": 20, "beta": 0.5},
                                          "weights": {"lo": 0.2, "hi": 0.5}, "sizes": [100], "samples": 4})");
  const ExperimentOutput out = run_experiment(cfg);
  EXPECT_TRUE(out.failures.empty());
  EXPECT_EQ(out.records.size(), 20u);
  for (const TrialRecord& r : out.records) {
    EXPECT_GE(r.infected, 75u);
    EXPECT_LE(r.infected, 125u);
  }
}

TEST(Bench, RowsAndRepeatability) {
  ExperimentConfig cfg = parse_config(kErConfig);
  cfg.bench.sizes = {1, 30, 60};
  cfg.bench.samples_per_size = 2;
  const auto rows = bench_sft(cfg);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].infected, 1u);
  EXPECT_LT(rows[0].seconds, 1e-3);
  for (const BenchRow& r : rows) {
    EXPECT_EQ(r.work, static_cast<double>(r.infected) * static_cast<double>(r.degree_sum));
    EXPECT_GE(r.seconds, 0.0);
  }
  const auto again = bench_sft(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(again[i].estimator, rows[i].estimator);
    EXPECT_EQ(again[i].work, rows[i].work);
  }
}

TEST(FitLine, ExactAndErrors) {
  const LinearFit f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_LT(fit_line({1, 2, 3, 4}, {1, -1, 1, -1}).r_squared, 0.5);
  EXPECT_THROW(fit_line({1}, {1}), Error);
  EXPECT_THROW(fit_line({2, 2}, {1, 3}), Error);
}

}  // namespace
}  // namespace sft
