// Command-line front end: generate | simulate | localize | experiment | bench.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sft/baselines.hpp"
#include "sft/diffusion.hpp"
#include "sft/edge_list_io.hpp"
#include "sft/error.hpp"
#include "sft/generators.hpp"
#include "sft/harness.hpp"
#include "sft/localization.hpp"
#include "sft/snapshot_io.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateArgs {
  std::string type = "er";
  std::size_t n = 0;
  double p = 0.0;
  unsigned m = 20;
  double beta = 0.5;
  std::size_t budget = 10000;
  std::optional<double> lo, hi;
  std::uint64_t seed = 0;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  sft::Rng rng = sft::Rng::substream(a.seed, {0});
  sft::Graph g;
  if (a.type == "er") {
    if (a.n == 0) throw UsageError("--n is required for er graphs");
    g = sft::gen_er(a.n, a.p, rng);
  } else if (a.type == "binomial") {
    g = sft::gen_binomial_tree(a.m, a.beta, a.budget, rng);
  } else {
    throw UsageError("--type must be er or binomial");
  }
  if (a.lo.has_value() != a.hi.has_value()) throw UsageError("--lo and --hi must be given together");
  if (a.lo) {
    sft::Rng wrng = sft::Rng::substream(a.seed, {1});
    g = sft::assign_weights(g, *a.lo, *a.hi, wrng);
  }
  sft::write_edge_list(g, a.out);
  std::cout << "wrote " << g.node_count() << " nodes, " << g.edge_count() << " edges to " << a.out << '\n';
  return 0;
}

struct SimulateArgs {
  std::string graph;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::size_t> size;
  std::optional<std::uint32_t> time;
  std::optional<sft::NodeId> source;
  std::size_t max_attempts = 1000;
};

int run_simulate(const SimulateArgs& a) {
  if (a.size.has_value() == a.time.has_value()) throw UsageError("give exactly one of --size or --time");
  const sft::Graph g = sft::read_edge_list(a.graph);
  sft::Rng rng = sft::Rng::substream(a.seed, {0});
  sft::Snapshot s;
  if (a.size) {
    if (a.source) throw UsageError("--source only applies with --time");
    s = sft::sample_snapshot_window(g, sft::SizeWindow::around(static_cast<double>(*a.size)), a.max_attempts, rng);
  } else {
    const sft::NodeId source =
        a.source ? *a.source : static_cast<sft::NodeId>(rng.uniform_index(std::max<std::size_t>(1, g.node_count())));
    s = sft::simulate_ic(g, source, *a.time, rng);
  }
  sft::write_snapshot(s, a.out);
  std::cout << "wrote snapshot with " << s.infected_count() << " infected nodes to " << a.out << '\n';
  return 0;
}

struct LocalizeArgs {
  std::string graph;
  std::string snapshot;
  std::string algo = "sft-bnd";
  std::uint64_t seed = 0;
  std::size_t top = 10;
};

int run_localize(const LocalizeArgs& a) {
  const auto algorithm = sft::parse_algorithm(a.algo);
  if (!algorithm) throw UsageError("--algo: unknown algorithm '" + a.algo + "'");
  const sft::Graph g = sft::read_edge_list(a.graph);
  const sft::Snapshot s = sft::read_snapshot(a.snapshot);
  sft::validate_snapshot(g, s);

  sft::LocalizationResult result;
  switch (*algorithm) {
    case sft::Algorithm::kSftWbnd: result = sft::sft_estimate(g, s, sft::TieBreak::kWbnd); break;
    case sft::Algorithm::kSftBnd: result = sft::sft_estimate(g, s, sft::TieBreak::kBnd); break;
    case sft::Algorithm::kEcce: {
      sft::Rng rng = sft::Rng::substream(a.seed, {0});
      result = sft::ecce_estimate(g, s, rng);
      break;
    }
    case sft::Algorithm::kRum: result = sft::rum_estimate(g, s); break;
    case sft::Algorithm::kNetsleuth: result = sft::netsleuth_estimate(g, s); break;
  }

  std::cout << result.estimator << '\n';
  const std::size_t shown = std::min(a.top, result.scores.size());
  for (std::size_t i = 0; i < shown; ++i) {
    const sft::NodeScore& ns = result.scores[i];
    std::cout << "# " << (i + 1) << '\t' << ns.node << "\tecc=";
    if (ns.eccentricity) {
      std::cout << *ns.eccentricity;
    } else {
      std::cout << '-';
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", ns.score);
    std::cout << "\tscore=" << buf << '\n';
  }
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<double> gammas;
};

sft::ExperimentConfig load_with_overrides(const ExperimentArgs& a) {
  sft::ExperimentConfig cfg = sft::load_config(a.config);
  if (a.workers) {
    if (*a.workers == 0) throw UsageError("--workers must be >= 1");
    cfg.workers = *a.workers;
  }
  if (a.seed) cfg.master_seed = *a.seed;
  if (!a.gammas.empty()) cfg.gammas = a.gammas;
  if (a.out) {
    const std::filesystem::path dir(*a.out);
    cfg.records_path = dir / "records.csv";
    cfg.summary_path = dir / "summary.csv";
    cfg.failures_path = dir / "failures.csv";
  }
  return cfg;
}

int run_experiment(const ExperimentArgs& a) {
  const sft::ExperimentConfig cfg = load_with_overrides(a);
  const sft::ExperimentOutput out = sft::run_experiment(cfg);
  sft::write_experiment_outputs(cfg, out);
  if (!out.records.empty()) {
    sft::write_summary_csv(sft::summarize(out.records, cfg.gammas), cfg.gammas, std::cout);
  }
  std::cerr << out.records.size() << " records, " << out.failures.size() << " failures\n";
  return 0;
}

int run_bench(const ExperimentArgs& a) {
  const sft::ExperimentConfig cfg = load_with_overrides(a);
  if (cfg.bench.sizes.empty()) throw UsageError("config has no bench.sizes");
  const auto rows = sft::bench_sft(cfg);
  if (a.out) {
    std::filesystem::create_directories(*a.out);
    std::ofstream f(std::filesystem::path(*a.out) / "bench.csv");
    sft::write_bench_csv(rows, f);
  }
  sft::write_bench_csv(rows, std::cout);
  if (rows.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
      x.push_back(r.work);
      y.push_back(r.seconds);
    }
    try {
      const sft::LinearFit fit = sft::fit_line(x, y);
      std::cerr << "fit seconds ~ work: slope=" << fit.slope << " intercept=" << fit.intercept
                << " r2=" << fit.r_squared << '\n';
    } catch (const sft::Error&) {
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information source localization under the independent cascade model"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a random graph as an edge list");
  generate->add_option("--type", gen.type, "er | binomial")->capture_default_str();
  generate->add_option("--n", gen.n, "ER node count");
  generate->add_option("--p", gen.p, "ER wiring probability");
  generate->add_option("--m", gen.m, "binomial trials per node")->capture_default_str();
  generate->add_option("--beta", gen.beta, "binomial success probability")->capture_default_str();
  generate->add_option("--budget", gen.budget, "binomial tree node budget")->capture_default_str();
  generate->add_option("--lo", gen.lo, "lower bound of edge probabilities");
  generate->add_option("--hi", gen.hi, "upper bound of edge probabilities");
  generate->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  generate->add_option("--out", gen.out, "output edge-list path")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw an IC snapshot on a graph");
  simulate->add_option("--graph", sim.graph, "edge-list file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "output snapshot JSON")->required();
  simulate->add_option("--size", sim.size, "target size x; accepts |I| in [0.75x, 1.25x]");
  simulate->add_option("--time", sim.time, "run exactly this many slots");
  simulate->add_option("--source", sim.source, "source node for --time (default: uniform)");
  simulate->add_option("--max-attempts", sim.max_attempts, "draws before giving up")->capture_default_str();

  LocalizeArgs loc;
  auto* localize = app.add_subcommand("localize", "Estimate the source of a snapshot");
  localize->add_option("--graph", loc.graph, "edge-list file")->required()->check(CLI::ExistingFile);
  localize->add_option("--snapshot", loc.snapshot, "snapshot JSON")->required()->check(CLI::ExistingFile);
  localize->add_option("--algo", loc.algo, "sft-wbnd | sft-bnd | ecce | rum | netsleuth")->capture_default_str();
  localize->add_option("--seed", loc.seed, "seed for ecce tie-breaking")->capture_default_str();
  localize->add_option("--top", loc.top, "ranking entries to print")->capture_default_str();

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a configured Monte Carlo sweep");
  ExperimentArgs ben;
  auto* bench = app.add_subcommand("bench", "Time the estimator across infection sizes");
  for (auto [cmd, args] : {std::pair{experiment, &exp}, std::pair{bench, &ben}}) {
    cmd->add_option("--config", args->config, "JSON config")->required()->check(CLI::ExistingFile);
    cmd->add_option("--workers", args->workers, "worker threads")->envname("RB_WORKERS");
    cmd->add_option("--seed", args->seed, "override master_seed");
    cmd->add_option("--out", args->out, "output directory");
    cmd->add_option("--gamma", args->gammas, "gamma percentages for accuracy columns");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*simulate) return run_simulate(sim);
    if (*localize) return run_localize(loc);
    if (*experiment) return run_experiment(exp);
    if (*bench) return run_bench(ben);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const sft::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
