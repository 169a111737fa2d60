#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ops/graph.hpp"
#include "ops/sampling.hpp"
#include "ops/sdp.hpp"
#include "ops/similarity.hpp"

namespace ops {

enum class Method { Naive, Greedy, Balanced, Sdp, BruteForce, GreedyPerturbed };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// Flat key=value experiment description; the CLI maps both config-file lines
// and command-line overrides onto set().
struct ExperimentConfig {
  std::string kind = "sweep_r";  // sweep_r | sweep_ratio | sweep_inward | perturb

  // graph source: planted-partition parameters, or a fixed graph on disk
  int n = 100;
  int k = 20;
  double p_high = 0.9;
  double p_low = 0.01;
  std::string graph_path;
  std::string meta_path;

  double mu0 = 0.5;
  ValueSpec lambda_spec = ValueSpec::constant(1.0);
  ValueSpec inward_spec = ValueSpec::uniform_range(0.0, 0.01);

  std::vector<Method> methods = {Method::Naive, Method::Greedy};
  std::vector<int> r_values = {20};
  int replicates = 20;
  std::uint64_t seed = 1;
  std::string out_path;

  SolverConfig solver;
  SweepMode sweep_mode = SweepMode::GaussSeidel;
  SdpConfig sdp;
  PerturbConfig perturb;

  std::vector<double> ratios = {100, 1000, 10000, 100000};  // sweep_ratio values
  std::vector<double> inwards = {0.05, 0.1, 0.2, 0.4, 0.8};  // sweep_inward values

  int threads = 1;  // worker threads across cells; never changes results

  static ExperimentConfig from_file(const std::string& path);

  // Applies one key=value setting; throws std::invalid_argument on an unknown
  // key or unparsable value.
  void set(const std::string& key, const std::string& value);

  // Returns every validation failure (empty means runnable).
  std::vector<std::string> validate() const;
};

// Carries the full list of validation failures so callers can report them
// exhaustively before exiting.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct ExperimentRow {
  std::string experiment;
  std::string method;
  int r = 0;
  int replicate = 0;
  std::uint64_t seed = 0;  // derived stream key consumed by this cell
  double param = 0.0;      // r (sweep_r), ratio, inward probability, or noise base
  double expected_variance = 0.0;
  double improvement = 0.0;  // 1 - ev / ev_naive on the same graph
};

std::string experiment_csv(const std::vector<ExperimentRow>& rows);

// Runs every cell of the configured experiment. Each replicate owns one
// derived generator stream shared across the parameter grid: the inward sweep
// reuses the replicate's topology unchanged and the ratio sweep reuses its
// per-pair uniforms (nested edge sets), so reported trends are
// monotone-coupled. Cells may run on cfg.threads workers; results are
// identical to the sequential order regardless.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

}  // namespace ops
