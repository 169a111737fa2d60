// Command-line front end: graph generation, similarity computation,
// partitioning, variance evaluation, and the config-driven experiment runner.
// Every command either writes its complete output or exits nonzero with the
// failure on stderr; nothing is written on a failed run.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ops/experiment.hpp"
#include "ops/io.hpp"
#include "ops/partition.hpp"
#include "ops/sampling.hpp"
#include "ops/sdp.hpp"
#include "ops/similarity.hpp"
#include "ops/vio.hpp"

namespace {

ops::SweepMode parse_sweep_mode(const std::string& mode) {
  if (mode == "gs") return ops::SweepMode::GaussSeidel;
  if (mode == "jacobi") return ops::SweepMode::Jacobi;
  throw std::invalid_argument("--sweep-mode: expected 'gs' or 'jacobi', got '" + mode + "'");
}

struct GenGraphArgs {
  int n = 100;
  int k = 20;
  double p_high = 0.9;
  double p_low = 0.01;
  std::string lambda_spec = "const:1";
  std::string inward_spec = "uniform:0,0.01";
  std::uint64_t seed = 1;
  std::string out;
  std::string meta;
  std::string labels;
};

void run_gen_graph(const GenGraphArgs& a) {
  ops::PlantedPartitionConfig cfg;
  cfg.n = a.n;
  cfg.k = a.k;
  cfg.p_high = a.p_high;
  cfg.p_low = a.p_low;
  cfg.seed = a.seed;
  ops::PlantedGraph pg = ops::generate_planted_partition(
      cfg, ops::ValueSpec::parse(a.lambda_spec), ops::ValueSpec::parse(a.inward_spec));
  ops::save_graph(pg.graph, a.out, a.meta);
  if (!a.labels.empty()) ops::save_labels(pg.labels, a.labels);
  std::cout << "graph: n=" << pg.graph.n() << " m=" << pg.graph.edge_count() << " -> " << a.out
            << "\n";
}

struct SimilaritiesArgs {
  std::string graph;
  std::string meta;
  double mu0 = 0.5;
  ops::SolverConfig solver;
  std::string sweep_mode = "gs";
  std::string out;
  int monte_carlo = 0;
  std::uint64_t seed = 1;
  std::string dump_samples;
  bool correlation = false;
};

void run_similarities(const SimilaritiesArgs& a) {
  const ops::SocialGraph g = ops::load_graph(a.graph, a.meta);
  const ops::SweepMode mode = parse_sweep_mode(a.sweep_mode);

  if (a.correlation) {
    const ops::CorrelationMatrix rho = ops::exact_correlation(g, a.solver, mode);
    ops::save_similarity_csv(ops::SimilarityMatrix{rho.rho}, a.out);
    std::cout << "correlations for " << g.n() << " nodes -> " << a.out << "\n";
    return;
  }

  const ops::SimilarityMatrix sim = ops::exact_similarity(g, a.mu0, a.solver, mode);
  std::optional<ops::SimilarityMatrix> empirical;
  if (a.monte_carlo > 0)
    empirical = ops::empirical_similarity(g, {a.mu0}, a.monte_carlo, a.seed);
  ops::save_similarity_csv(sim, a.out, empirical ? &*empirical : nullptr);

  if (!a.dump_samples.empty()) {
    // replay the empirical column's per-sample streams so the dump lists the
    // exact draws that were aggregated
    ops::SteadyStateSampler sampler(g);
    ops::Rng root(a.seed);
    std::vector<ops::SteadyStateSample> samples;
    samples.reserve(static_cast<std::size_t>(a.monte_carlo));
    for (int s = 0; s < a.monte_carlo; ++s) {
      ops::Rng rng = root.fork(static_cast<std::uint64_t>(s));
      samples.push_back(sampler.draw({a.mu0}, rng));
    }
    ops::write_file(a.dump_samples, ops::sample_dump_csv(samples));
  }
  std::cout << "similarities for " << g.n() << " nodes -> " << a.out << "\n";
}

struct PartitionArgs {
  std::string sim;
  std::string graph;
  std::string meta;
  double mu0 = 0.5;
  ops::SolverConfig solver;
  std::string sweep_mode = "gs";
  std::string method = "greedy";
  int r = 2;
  std::uint64_t seed = 1;
  std::string out;
  ops::SdpConfig sdp;
};

void run_partition(const PartitionArgs& a) {
  ops::SimilarityMatrix sim{ops::SquareMatrix(1)};
  if (!a.sim.empty()) {
    sim = ops::load_similarity_csv(a.sim);
  } else if (!a.graph.empty() && !a.meta.empty()) {
    sim = ops::exact_similarity(ops::load_graph(a.graph, a.meta), a.mu0, a.solver,
                                parse_sweep_mode(a.sweep_mode));
  } else {
    throw std::invalid_argument("partition: pass --sim, or --graph together with --meta");
  }

  const ops::AssistantGraph ga = ops::build_assistant_graph(sim);
  ops::SimplePartition sp;
  const ops::Method method = ops::method_from_name(a.method);
  switch (method) {
    case ops::Method::Greedy:
      sp = ops::greedy_partition(ga, a.r, a.seed);
      break;
    case ops::Method::Balanced:
      sp = ops::balanced_greedy_partition(ga, a.r, a.seed);
      break;
    case ops::Method::Sdp:
      sp = ops::sdp_partition(ga, a.r, a.seed, a.sdp).partition;
      break;
    case ops::Method::BruteForce:
      sp = ops::brute_force_optimal(ga, a.r);
      break;
    default:
      throw std::invalid_argument("partition: method must be greedy, balanced, sdp, or bruteforce");
  }
  ops::save_partition(sp.to_partition(), a.out);
  std::cout << a.method << " partition, r=" << a.r << ", g=" << ops::format_double(cost(ga, sp))
            << ", expected variance=" << ops::format_double(ops::expected_variance_simple(sim, sp))
            << " -> " << a.out << "\n";
}

struct EvaluateArgs {
  std::string sim;
  std::string partition;
  double mu0 = 0.5;
  std::string label = "partition";
  std::string out;
  bool with_naive = false;
};

void run_evaluate(const EvaluateArgs& a) {
  const ops::SimilarityMatrix sim = ops::load_similarity_csv(a.sim);
  const ops::Partition p = ops::load_partition(a.partition);
  ops::validate_partition(p, sim.n());

  bool simple = true;
  for (int rk : p.subsamples)
    if (rk != 1) simple = false;

  double ev = 0.0;
  if (simple) {
    ops::SimplePartition sp;
    sp.groups = p.groups;
    ev = ops::expected_variance_simple(sim, sp);
  } else {
    // steady-state opinions inherit the innate mean at every node
    ops::MeanVector mu;
    mu.mu.assign(static_cast<std::size_t>(sim.n()), a.mu0);
    ev = ops::expected_variance_general(sim, mu, p);
  }

  std::vector<ops::VarianceRow> rows;
  rows.push_back({a.label, p.r(), ev, 0});
  if (a.with_naive)
    rows.push_back({"naive", p.r(), ops::expected_variance_naive(sim, p.r()), 0});
  ops::write_file(a.out, ops::variance_report_csv(rows));
  std::cout << a.label << ": expected variance " << ops::format_double(ev) << " -> " << a.out
            << "\n";
}

struct ExperimentArgs {
  std::string config;
  std::vector<std::pair<std::string, std::string>> overrides;  // applied in order
};

// Registers one override flag that records (key, value) when given, so config
// parsing stays in one place (ExperimentConfig::set) for files and flags.
void add_override(CLI::App* cmd, ExperimentArgs& args, const std::string& flag,
                  const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&args, key](const std::string& value) { args.overrides.emplace_back(key, value); },
      help);
}

void run_experiment_cmd(const ExperimentArgs& a, const char* forced_kind) {
  ops::ExperimentConfig cfg;
  if (!a.config.empty()) cfg = ops::ExperimentConfig::from_file(a.config);
  std::vector<std::string> issues;
  for (const auto& [key, value] : a.overrides) {
    try {
      cfg.set(key, value);
    } catch (const std::invalid_argument& e) {
      issues.push_back(std::string("--") + key + ": " + e.what());
    }
  }
  if (!issues.empty()) throw ops::ConfigError(issues);
  if (forced_kind) cfg.kind = forced_kind;

  const std::vector<ops::ExperimentRow> rows = ops::run_experiment(cfg);
  const std::string csv = ops::experiment_csv(rows);
  if (cfg.out_path.empty()) {
    std::cout << csv;
  } else {
    ops::write_file(cfg.out_path, csv);
    std::cout << cfg.kind << ": " << rows.size() << " rows -> " << cfg.out_path << "\n";
  }
}

void add_experiment_overrides(CLI::App* cmd, ExperimentArgs& args, bool with_kind) {
  cmd->add_option("--config", args.config, "key=value config file");
  if (with_kind)
    add_override(cmd, args, "--kind", "kind", "sweep_r, sweep_ratio, sweep_inward, or perturb");
  add_override(cmd, args, "--n", "n", "number of nodes");
  add_override(cmd, args, "--k", "k", "number of planted groups");
  add_override(cmd, args, "--ph", "p_high", "within-group edge probability");
  add_override(cmd, args, "--pl", "p_low", "cross-group edge probability");
  add_override(cmd, args, "--graph", "graph", "fixed graph file (skips generation)");
  add_override(cmd, args, "--meta", "meta", "node metadata file for --graph");
  add_override(cmd, args, "--mu0", "mu0", "innate opinion mean");
  add_override(cmd, args, "--lambda", "lambda", "lambda spec (const:V or uniform:LO,HI)");
  add_override(cmd, args, "--inward", "inward", "inward probability spec");
  add_override(cmd, args, "--methods", "methods", "comma list: naive,greedy,balanced,sdp,bruteforce");
  add_override(cmd, args, "--r", "r", "comma list of r values");
  add_override(cmd, args, "--replicates", "replicates", "replicates per cell");
  add_override(cmd, args, "--seed", "seed", "master seed");
  add_override(cmd, args, "--out", "out", "output CSV path (default: stdout)");
  add_override(cmd, args, "--tol", "tol", "solver tolerance");
  add_override(cmd, args, "--max-sweeps", "max_sweeps", "solver sweep cap");
  add_override(cmd, args, "--sweep-mode", "sweep_mode", "gs or jacobi");
  add_override(cmd, args, "--ratios", "ratios", "comma list of p_high/p_low ratios");
  add_override(cmd, args, "--inwards", "inwards", "comma list of uniform inward probabilities");
  add_override(cmd, args, "--noise-base", "noise_base", "perturbation base noise range");
  add_override(cmd, args, "--noise-slope", "noise_slope", "perturbation slope vs similarity");
  add_override(cmd, args, "--threads", "threads", "worker threads for experiment cells");
  add_override(cmd, args, "--sdp-iters", "sdp_iters", "SDP gradient iteration cap");
  add_override(cmd, args, "--sdp-trials", "sdp_trials", "SDP rounding trials");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned sampling of opinions: similarities, partitions, experiments"};
  app.require_subcommand(1);

  GenGraphArgs gen;
  CLI::App* cmd_gen = app.add_subcommand("gen-graph", "Generate a planted-partition graph");
  cmd_gen->add_option("--n", gen.n, "number of nodes");
  cmd_gen->add_option("--k", gen.k, "number of planted groups");
  cmd_gen->add_option("--ph", gen.p_high, "within-group edge probability");
  cmd_gen->add_option("--pl", gen.p_low, "cross-group edge probability");
  cmd_gen->add_option("--lambda", gen.lambda_spec, "lambda spec (const:V or uniform:LO,HI)");
  cmd_gen->add_option("--inward", gen.inward_spec, "inward probability spec");
  cmd_gen->add_option("--seed", gen.seed, "generator seed");
  cmd_gen->add_option("--out", gen.out, "graph file to write")->required();
  cmd_gen->add_option("--meta", gen.meta, "metadata file to write")->required();
  cmd_gen->add_option("--labels", gen.labels, "latent group label file to write");

  SimilaritiesArgs sims;
  CLI::App* cmd_sim = app.add_subcommand("similarities", "Compute exact pairwise similarities");
  cmd_sim->add_option("--graph", sims.graph, "graph file")->required();
  cmd_sim->add_option("--meta", sims.meta, "node metadata file")->required();
  cmd_sim->add_option("--mu0", sims.mu0, "innate opinion mean");
  cmd_sim->add_option("--tol", sims.solver.tol, "solver tolerance");
  cmd_sim->add_option("--max-sweeps", sims.solver.max_sweeps, "solver sweep cap");
  cmd_sim->add_option("--sweep-mode", sims.sweep_mode, "gs or jacobi");
  cmd_sim->add_option("--out", sims.out, "similarity CSV to write")->required();
  CLI::Option* mc =
      cmd_sim->add_option("--monte-carlo", sims.monte_carlo, "add an empirical column (N draws)");
  cmd_sim->add_option("--seed", sims.seed, "Monte-Carlo seed")->needs(mc);
  cmd_sim->add_option("--dump-samples", sims.dump_samples, "also dump the drawn samples as CSV")
      ->needs(mc);
  cmd_sim->add_flag("--correlation", sims.correlation, "export correlations instead")
      ->excludes(mc);

  PartitionArgs part;
  CLI::App* cmd_part = app.add_subcommand("partition", "Find a low-variance simple partition");
  cmd_part->add_option("--sim", part.sim, "similarity CSV (else give --graph and --meta)");
  cmd_part->add_option("--graph", part.graph, "graph file");
  cmd_part->add_option("--meta", part.meta, "node metadata file");
  cmd_part->add_option("--mu0", part.mu0, "innate opinion mean (with --graph)");
  cmd_part->add_option("--tol", part.solver.tol, "solver tolerance (with --graph)");
  cmd_part->add_option("--max-sweeps", part.solver.max_sweeps, "solver sweep cap (with --graph)");
  cmd_part->add_option("--sweep-mode", part.sweep_mode, "gs or jacobi (with --graph)");
  cmd_part->add_option("--method", part.method, "greedy, balanced, sdp, or bruteforce");
  cmd_part->add_option("--r", part.r, "number of groups")->required();
  cmd_part->add_option("--seed", part.seed, "partitioner seed");
  cmd_part->add_option("--out", part.out, "partition file to write")->required();
  cmd_part->add_option("--sdp-iters", part.sdp.max_iters, "SDP gradient iteration cap");
  cmd_part->add_option("--sdp-trials", part.sdp.rounding_trials, "SDP rounding trials");

  EvaluateArgs eval;
  CLI::App* cmd_eval = app.add_subcommand("evaluate", "Expected variance of a stored partition");
  cmd_eval->add_option("--sim", eval.sim, "similarity CSV")->required();
  cmd_eval->add_option("--partition", eval.partition, "partition file")->required();
  cmd_eval->add_option("--mu0", eval.mu0, "innate opinion mean (non-simple partitions)");
  cmd_eval->add_option("--label", eval.label, "method label for the report row");
  cmd_eval->add_option("--out", eval.out, "variance report CSV to write")->required();
  cmd_eval->add_flag("--with-naive", eval.with_naive, "append the naive baseline row");

  ExperimentArgs exp;
  CLI::App* cmd_exp = app.add_subcommand("experiment", "Run a config-driven experiment");
  add_experiment_overrides(cmd_exp, exp, /*with_kind=*/true);

  ExperimentArgs pert;
  CLI::App* cmd_pert =
      app.add_subcommand("perturb", "Perturbation-robustness experiment (naive/greedy/greedy_p)");
  add_experiment_overrides(cmd_pert, pert, /*with_kind=*/false);

  try {
    app.parse(argc, argv);
    if (cmd_gen->parsed()) run_gen_graph(gen);
    if (cmd_sim->parsed()) run_similarities(sims);
    if (cmd_part->parsed()) run_partition(part);
    if (cmd_eval->parsed()) run_evaluate(eval);
    if (cmd_exp->parsed()) run_experiment_cmd(exp, nullptr);
    if (cmd_pert->parsed()) run_experiment_cmd(pert, "perturb");
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ops::ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "error: " << issue << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
