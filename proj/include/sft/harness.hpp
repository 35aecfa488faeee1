#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sft/evaluation.hpp"
#include "sft/graph.hpp"
#include "sft/localization.hpp"

namespace sft {

struct GraphSpec {
  enum class Kind { kEr, kBinomial, kFile };
  Kind kind = Kind::kEr;
  std::size_t n = 0;          // er
  double p = 0.0;             // er
  unsigned m = 0;             // binomial
  double beta = 0.0;          // binomial
  std::size_t budget = 0;     // binomial: node cap per grown tree
  std::filesystem::path path; // file
};

struct WeightSpec {
  double lo;
  double hi;
};

struct BenchSpec {
  std::vector<std::size_t> sizes;
  std::size_t samples_per_size = 3;
  std::size_t repeats = 3;
  TieBreak mode = TieBreak::kBnd;
};

struct ExperimentConfig {
  GraphSpec graph;
  std::optional<WeightSpec> weights;  // required for binomial graphs
  std::vector<std::size_t> sizes;
  std::size_t samples = 0;
  std::vector<Algorithm> algorithms;
  std::uint64_t master_seed = 0;
  std::vector<double> gammas;
  double window_lo = 0.75;  // accepted |I| in [window_lo * x, window_hi * x]
  double window_hi = 1.25;
  std::size_t max_attempts = 1000;
  bool record_seconds = false;  // off keeps record files byte-reproducible
  std::size_t workers = 1;
  std::filesystem::path records_path;
  std::filesystem::path summary_path;
  std::filesystem::path failures_path;
  BenchSpec bench;
};

// Parses a JSON config; error messages name the offending field. Relative
// paths are resolved against base_dir.
ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Shared graph for er/file specs, generated from the master seed.
Graph prepare_graph(const ExperimentConfig& cfg);

struct TrialFailure {
  std::size_t trial;
  std::size_t target_size;
  std::optional<Algorithm> algorithm;  // empty when the snapshot itself failed
  std::string error;
};

struct ExperimentOutput {
  std::vector<TrialRecord> records;  // sorted by (size, sample, algorithm)
  std::vector<TrialFailure> failures;
};

/// Runs every (size, sample) trial: one snapshot per trial, drawn from the
/// substream (master_seed, size_index, sample_index), and every configured
/// algorithm on that same snapshot. Trials are spread over cfg.workers
/// threads; output does not depend on the worker count.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Writes records, summary and failures CSVs to the paths set in cfg (empty paths are skipped).
void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out);

void write_failures_csv(const std::vector<TrialFailure>& failures, std::ostream& out);

struct BenchRow {
  std::size_t target_size;
  std::size_t infected;
  std::uint64_t degree_sum;  // total g-degree of the infected nodes
  double work;               // infected * degree_sum
  double seconds;            // fastest of the repeats
  NodeId estimator;
};

// Times sft_estimate on snapshots of each bench size.
std::vector<BenchRow> bench_sft(const ExperimentConfig& cfg);
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

struct LinearFit {
  double slope;
  double intercept;
  double r_squared;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sft
