#include "sft/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sft/baselines.hpp"
#include "sft/diffusion.hpp"
#include "sft/edge_list_io.hpp"
#include "sft/error.hpp"
#include "sft/generators.hpp"
#include "sft/rng.hpp"

namespace sft {

using nlohmann::json;

namespace {

// Substream keys outside the (size_index, sample_index) space.
constexpr std::uint64_t kGraphStream = 0xffff'0001;
constexpr std::uint64_t kWeightStream = 0xffff'0002;
constexpr std::uint64_t kBenchStream = 0xffff'0003;
constexpr std::uint64_t kEcceStream = 0xecce;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kInvalidArgument, "config field '" + field + "': " + why);
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) bad_field(path + key, "missing");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad_field(path + key, "has the wrong type");
  }
}

template <typename T>
T get_field_or(const json& obj, const std::string& key, const std::string& path, T fallback) {
  return obj.contains(key) ? get_field<T>(obj, key, path) : fallback;
}

void check_probability(double p, const std::string& field) {
  if (!(p >= 0.0 && p <= 1.0)) bad_field(field, "must be in [0, 1]");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");

  ExperimentConfig cfg;
  if (!doc.contains("graph") || !doc["graph"].is_object()) bad_field("graph", "missing or not an object");
  const json& graph = doc["graph"];
  const auto type = get_field<std::string>(graph, "type", "graph.");
  if (type == "er") {
    cfg.graph.kind = GraphSpec::Kind::kEr;
    cfg.graph.n = get_field<std::size_t>(graph, "n", "graph.");
    cfg.graph.p = get_field<double>(graph, "p", "graph.");
    if (cfg.graph.n == 0) bad_field("graph.n", "must be >= 1");
    check_probability(cfg.graph.p, "graph.p");
  } else if (type == "binomial") {
    cfg.graph.kind = GraphSpec::Kind::kBinomial;
    cfg.graph.m = get_field<unsigned>(graph, "m", "graph.");
    cfg.graph.beta = get_field<double>(graph, "beta", "graph.");
    cfg.graph.budget = get_field_or<std::size_t>(graph, "budget", "graph.", 1'000'000);
    check_probability(cfg.graph.beta, "graph.beta");
    if (cfg.graph.budget == 0) bad_field("graph.budget", "must be >= 1");
  } else if (type == "file") {
    cfg.graph.kind = GraphSpec::Kind::kFile;
    cfg.graph.path = resolve(base_dir, get_field<std::string>(graph, "path", "graph."));
  } else {
    bad_field("graph.type", "must be one of er, binomial, file");
  }

  if (doc.contains("weights")) {
    WeightSpec w{get_field<double>(doc["weights"], "lo", "weights."), get_field<double>(doc["weights"], "hi", "weights.")};
    if (!(0.0 <= w.lo && w.lo <= w.hi && w.hi <= 1.0)) bad_field("weights", "need 0 <= lo <= hi <= 1");
    cfg.weights = w;
  } else if (cfg.graph.kind == GraphSpec::Kind::kBinomial) {
    bad_field("weights", "required for binomial graphs");
  }

  cfg.sizes = get_field_or<std::vector<std::size_t>>(doc, "sizes", "", {});
  for (std::size_t x : cfg.sizes) {
    if (x == 0) bad_field("sizes", "every size must be >= 1");
  }
  cfg.samples = get_field_or<std::size_t>(doc, "samples", "", 0);
  const auto algos = get_field_or<std::vector<std::string>>(doc, "algorithms", "", {"sft-wbnd", "sft-bnd", "ecce", "rum", "netsleuth"});
  for (const std::string& tag : algos) {
    auto a = parse_algorithm(tag);
    if (!a) bad_field("algorithms", "unknown algorithm '" + tag + "'");
    if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), *a) == cfg.algorithms.end()) cfg.algorithms.push_back(*a);
  }
  cfg.master_seed = get_field_or<std::uint64_t>(doc, "master_seed", "", 0);
  cfg.gammas = get_field_or<std::vector<double>>(doc, "gammas", "", {1.0, 5.0, 10.0});
  for (double g : cfg.gammas) {
    if (!(g > 0.0 && g <= 100.0)) bad_field("gammas", "every gamma must be in (0, 100]");
  }
  if (doc.contains("window")) {
    const auto w = get_field<std::vector<double>>(doc, "window", "");
    if (w.size() != 2 || !(w[0] >= 0.0 && w[0] <= w[1])) bad_field("window", "must be [lo_factor, hi_factor] with lo <= hi");
    cfg.window_lo = w[0];
    cfg.window_hi = w[1];
  }
  cfg.max_attempts = get_field_or<std::size_t>(doc, "max_attempts", "", 1000);
  if (cfg.max_attempts == 0) bad_field("max_attempts", "must be >= 1");
  cfg.record_seconds = get_field_or<bool>(doc, "record_seconds", "", false);
  cfg.workers = get_field_or<std::size_t>(doc, "workers", "", 1);
  if (cfg.workers == 0) bad_field("workers", "must be >= 1");

  if (doc.contains("output")) {
    const json& out = doc["output"];
    if (out.contains("records")) cfg.records_path = resolve(base_dir, get_field<std::string>(out, "records", "output."));
    if (out.contains("summary")) cfg.summary_path = resolve(base_dir, get_field<std::string>(out, "summary", "output."));
    if (out.contains("failures")) cfg.failures_path = resolve(base_dir, get_field<std::string>(out, "failures", "output."));
  }

  if (doc.contains("bench")) {
    const json& b = doc["bench"];
    cfg.bench.sizes = get_field_or<std::vector<std::size_t>>(b, "sizes", "bench.", {});
    cfg.bench.samples_per_size = get_field_or<std::size_t>(b, "samples_per_size", "bench.", 3);
    cfg.bench.repeats = get_field_or<std::size_t>(b, "repeats", "bench.", 3);
    if (cfg.bench.repeats == 0) bad_field("bench.repeats", "must be >= 1");
    const auto mode = get_field_or<std::string>(b, "mode", "bench.", "sft-bnd");
    if (mode == "sft-bnd") {
      cfg.bench.mode = TieBreak::kBnd;
    } else if (mode == "sft-wbnd") {
      cfg.bench.mode = TieBreak::kWbnd;
    } else {
      bad_field("bench.mode", "must be sft-bnd or sft-wbnd");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

Graph prepare_graph(const ExperimentConfig& cfg) {
  Graph g;
  switch (cfg.graph.kind) {
    case GraphSpec::Kind::kEr: {
      Rng rng = Rng::substream(cfg.master_seed, {kGraphStream});
      g = gen_er(cfg.graph.n, cfg.graph.p, rng);
      break;
    }
    case GraphSpec::Kind::kFile:
      g = read_edge_list(cfg.graph.path);
      break;
    case GraphSpec::Kind::kBinomial:
      throw Error(ErrorCode::kInvalidArgument, "binomial graphs are grown per trial");
  }
  if (cfg.weights) {
    Rng rng = Rng::substream(cfg.master_seed, {kWeightStream});
    g = assign_weights(g, cfg.weights->lo, cfg.weights->hi, rng);
  }
  return g;
}

namespace {

struct TrialOutput {
  std::vector<TrialRecord> records;
  std::vector<TrialFailure> failures;
};

LocalizationResult localize(Algorithm a, const Graph& g, const Snapshot& s, Rng& ecce_rng) {
  switch (a) {
    case Algorithm::kSftWbnd: return sft_estimate(g, s, TieBreak::kWbnd);
    case Algorithm::kSftBnd: return sft_estimate(g, s, TieBreak::kBnd);
    case Algorithm::kEcce: return ecce_estimate(g, s, ecce_rng);
    case Algorithm::kRum: return rum_estimate(g, s);
    case Algorithm::kNetsleuth: return netsleuth_estimate(g, s);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm");
}

GraphSnapshot draw_snapshot(const ExperimentConfig& cfg, const Graph* shared, std::size_t x, Rng& rng) {
  const SizeWindow window = SizeWindow::around(static_cast<double>(x), cfg.window_lo, cfg.window_hi);
  if (cfg.graph.kind == GraphSpec::Kind::kBinomial) {
    return sample_binomial_tree_snapshot(cfg.graph.m, cfg.graph.beta, cfg.weights->lo, cfg.weights->hi, window,
                                         cfg.graph.budget, cfg.max_attempts, rng);
  }
  return {Graph{}, sample_snapshot_window(*shared, window, cfg.max_attempts, rng)};
}

TrialOutput run_trial(const ExperimentConfig& cfg, const Graph* shared, std::size_t size_index, std::size_t sample) {
  TrialOutput out;
  const std::size_t x = cfg.sizes[size_index];
  const std::size_t trial = size_index * cfg.samples + sample;
  Rng rng = Rng::substream(cfg.master_seed, {size_index, sample});
  GraphSnapshot drawn;
  try {
    drawn = draw_snapshot(cfg, shared, x, rng);
  } catch (const Error& e) {
    out.failures.push_back({trial, x, std::nullopt, e.what()});
    return out;
  }
  const Graph& g = cfg.graph.kind == GraphSpec::Kind::kBinomial ? drawn.graph : *shared;
  const Snapshot& snapshot = drawn.snapshot;

  std::vector<Algorithm> algorithms = cfg.algorithms;
  std::sort(algorithms.begin(), algorithms.end());
  for (Algorithm a : algorithms) {
    Rng ecce_rng = Rng::substream(cfg.master_seed, {size_index, sample, kEcceStream});
    try {
      const auto start = std::chrono::steady_clock::now();
      const LocalizationResult result = localize(a, g, snapshot, ecce_rng);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      TrialRecord r = score_trial(g, snapshot, result);
      r.trial = trial;
      r.target_size = x;
      r.seconds = cfg.record_seconds ? elapsed.count() : 0.0;
      out.records.push_back(r);
    } catch (const Error& e) {
      out.failures.push_back({trial, x, a, e.what()});
    }
  }
  return out;
}

// Runs fn(i) for i in [0, count) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  std::optional<Graph> shared;
  if (cfg.graph.kind != GraphSpec::Kind::kBinomial) shared = prepare_graph(cfg);

  const std::size_t total = cfg.sizes.size() * cfg.samples;
  std::vector<TrialOutput> slots(total);
  parallel_for(total, cfg.workers, [&](std::size_t i) {
    slots[i] = run_trial(cfg, shared ? &*shared : nullptr, i / cfg.samples, i % cfg.samples);
  });

  ExperimentOutput out;
  for (TrialOutput& slot : slots) {
    out.records.insert(out.records.end(), slot.records.begin(), slot.records.end());
    for (TrialFailure& f : slot.failures) out.failures.push_back(std::move(f));
  }
  return out;
}

void write_failures_csv(const std::vector<TrialFailure>& failures, std::ostream& out) {
  out << "trial,size,algorithm,error\n";
  for (const TrialFailure& f : failures) {
    std::string message = f.error;
    std::replace(message.begin(), message.end(), '"', '\'');
    out << f.trial << ',' << f.target_size << ',' << (f.algorithm ? to_string(*f.algorithm) : "snapshot") << ",\""
        << message << "\"\n";
  }
}

namespace {

void write_file(const std::filesystem::path& path, const auto& writer) {
  if (path.empty()) return;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  writer(out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace

void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  write_file(cfg.records_path, [&](std::ostream& os) { write_records_csv(out.records, os); });
  write_file(cfg.summary_path, [&](std::ostream& os) {
    if (out.records.empty()) {
      write_summary_csv({}, cfg.gammas, os);
    } else {
      write_summary_csv(summarize(out.records, cfg.gammas), cfg.gammas, os);
    }
  });
  write_file(cfg.failures_path, [&](std::ostream& os) { write_failures_csv(out.failures, os); });
}

std::vector<BenchRow> bench_sft(const ExperimentConfig& cfg) {
  std::optional<Graph> shared;
  if (cfg.graph.kind != GraphSpec::Kind::kBinomial) shared = prepare_graph(cfg);

  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < cfg.bench.sizes.size(); ++i) {
    const std::size_t x = cfg.bench.sizes[i];
    for (std::size_t s = 0; s < cfg.bench.samples_per_size; ++s) {
      Rng rng = Rng::substream(cfg.master_seed, {kBenchStream, i, s});
      const GraphSnapshot drawn = draw_snapshot(cfg, shared ? &*shared : nullptr, x, rng);
      const Graph& g = cfg.graph.kind == GraphSpec::Kind::kBinomial ? drawn.graph : *shared;

      BenchRow row{x, drawn.snapshot.infected_count(), 0, 0.0, 0.0, 0};
      for (NodeId v : drawn.snapshot.infected) row.degree_sum += g.degree(v);
      row.work = static_cast<double>(row.infected) * static_cast<double>(row.degree_sum);
      row.seconds = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < cfg.bench.repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        const LocalizationResult result = sft_estimate(g, drawn.snapshot, cfg.bench.mode);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        row.seconds = std::min(row.seconds, elapsed.count());
        row.estimator = result.estimator;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "size,infected,degree_sum,work,seconds,estimator\n";
  char buf[64];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.0f,%.9f", r.work, r.seconds);
    out << r.target_size << ',' << r.infected << ',' << r.degree_sum << ',' << buf << ',' << r.estimator << '\n';
  }
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kInvalidArgument, "x values are all equal");
  const double slope = sxy / sxx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {slope, my - slope * mx, r2};
}

}  // namespace sft
