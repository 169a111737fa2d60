#include "ops/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>

#include "ops/io.hpp"
#include "ops/partition.hpp"

namespace ops {

std::string method_name(Method m) {
  switch (m) {
    case Method::Naive: return "naive";
    case Method::Greedy: return "greedy";
    case Method::Balanced: return "balanced";
    case Method::Sdp: return "sdp";
    case Method::BruteForce: return "bruteforce";
    case Method::GreedyPerturbed: return "greedy_p";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "naive") return Method::Naive;
  if (name == "greedy") return Method::Greedy;
  if (name == "balanced") return Method::Balanced;
  if (name == "sdp") return Method::Sdp;
  if (name == "bruteforce") return Method::BruteForce;
  if (name == "greedy_p") return Method::GreedyPerturbed;
  throw std::invalid_argument("unknown method '" + name + "'");
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(issues.empty() ? "invalid config"
                                        : "invalid config: " + issues.front() +
                                              (issues.size() > 1 ? " (+ more)" : "")),
      issues_(std::move(issues)) {}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected an integer, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected an unsigned integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument(key + ": expected a boolean, got '" + value + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  ExperimentConfig cfg;
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::string> issues;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back(path + ":" + std::to_string(line_no) + ": expected key=value");
      continue;
    }
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      issues.push_back(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!issues.empty()) throw ConfigError(issues);
  return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "kind") kind = value;
  else if (key == "n") n = static_cast<int>(parse_int(key, value));
  else if (key == "k") k = static_cast<int>(parse_int(key, value));
  else if (key == "p_high" || key == "ph") p_high = parse_double(key, value);
  else if (key == "p_low" || key == "pl") p_low = parse_double(key, value);
  else if (key == "graph") graph_path = value;
  else if (key == "meta") meta_path = value;
  else if (key == "mu0") mu0 = parse_double(key, value);
  else if (key == "lambda") lambda_spec = ValueSpec::parse(value);
  else if (key == "inward") inward_spec = ValueSpec::parse(value);
  else if (key == "methods") {
    methods.clear();
    for (const auto& name : split_list(value)) methods.push_back(method_from_name(name));
  } else if (key == "r") {
    r_values.clear();
    for (const auto& tok : split_list(value))
      r_values.push_back(static_cast<int>(parse_int(key, tok)));
  } else if (key == "replicates") replicates = static_cast<int>(parse_int(key, value));
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "out") out_path = value;
  else if (key == "tol") solver.tol = parse_double(key, value);
  else if (key == "max_sweeps") solver.max_sweeps = static_cast<int>(parse_int(key, value));
  else if (key == "sweep_mode") {
    if (value == "gs") sweep_mode = SweepMode::GaussSeidel;
    else if (value == "jacobi") sweep_mode = SweepMode::Jacobi;
    else throw std::invalid_argument("sweep_mode: expected 'gs' or 'jacobi'");
  } else if (key == "ratios") {
    ratios.clear();
    for (const auto& tok : split_list(value)) ratios.push_back(parse_double(key, tok));
  } else if (key == "inwards") {
    inwards.clear();
    for (const auto& tok : split_list(value)) inwards.push_back(parse_double(key, tok));
  } else if (key == "noise_base") perturb.noise_base = parse_double(key, value);
  else if (key == "noise_slope") perturb.noise_slope = parse_double(key, value);
  else if (key == "disconnected_to_half") perturb.disconnected_to_half = parse_bool(key, value);
  else if (key == "threads") threads = static_cast<int>(parse_int(key, value));
  else if (key == "sdp_iters") sdp.max_iters = static_cast<int>(parse_int(key, value));
  else if (key == "sdp_trials") sdp.rounding_trials = static_cast<int>(parse_int(key, value));
  else if (key == "sdp_rank_offset") sdp.rank_offset = static_cast<int>(parse_int(key, value));
  else if (key == "sdp_grad_tol") sdp.grad_tol = parse_double(key, value);
  else if (key == "sdp_max_nodes") sdp.max_nodes = static_cast<int>(parse_int(key, value));
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> issues;
  const bool fixed_graph = !graph_path.empty();

  if (kind != "sweep_r" && kind != "sweep_ratio" && kind != "sweep_inward" && kind != "perturb")
    issues.push_back("kind: expected sweep_r, sweep_ratio, sweep_inward, or perturb");
  if (fixed_graph && meta_path.empty())
    issues.push_back("meta: required when a fixed graph path is given");
  if (!fixed_graph) {
    if (n < 2) issues.push_back("n: must be >= 2");
    if (k < 1 || k > std::max(n, 1)) issues.push_back("k: must lie in [1, n]");
    if (p_high < 0.0 || p_high > 1.0) issues.push_back("p_high: must lie in [0,1]");
    if (p_low < 0.0 || p_low > 1.0) issues.push_back("p_low: must lie in [0,1]");
    if (p_low > p_high) issues.push_back("p_low: must not exceed p_high");
  }
  if (fixed_graph && (kind == "sweep_ratio" || kind == "sweep_inward"))
    issues.push_back(kind + ": requires planted-partition generation, not a fixed graph");
  if (mu0 <= 0.0 || mu0 >= 1.0)
    issues.push_back("mu0: must lie strictly inside (0,1) so variances are non-degenerate");
  if (methods.empty()) issues.push_back("methods: at least one method required");
  if (r_values.empty()) issues.push_back("r: at least one value required");
  for (int r : r_values) {
    if (r < 1) issues.push_back("r: values must be >= 1");
    else if (!fixed_graph && r > n) issues.push_back("r: values must not exceed n");
  }
  if (replicates < 1) issues.push_back("replicates: must be >= 1");
  if (!(solver.tol > 0.0)) issues.push_back("tol: must be positive");
  if (solver.max_sweeps < 1) issues.push_back("max_sweeps: must be >= 1");
  if (threads < 1) issues.push_back("threads: must be >= 1");
  if (kind == "sweep_ratio") {
    if (ratios.empty()) issues.push_back("ratios: at least one value required");
    for (double v : ratios)
      if (!(v >= 1.0)) issues.push_back("ratios: values must be >= 1");
  }
  if (kind == "sweep_inward") {
    if (inwards.empty()) issues.push_back("inwards: at least one value required");
    for (double v : inwards)
      if (!(v > 0.0) || v > 1.0) issues.push_back("inwards: values must lie in (0,1]");
  }
  for (Method m : methods) {
    if (m == Method::BruteForce && !fixed_graph && n > 12)
      issues.push_back("methods: bruteforce is guarded to n <= 12");
    if (m == Method::Sdp && !fixed_graph && n > sdp.max_nodes)
      issues.push_back("methods: sdp is guarded to n <= " + std::to_string(sdp.max_nodes));
    if (m == Method::GreedyPerturbed && kind != "perturb")
      issues.push_back("methods: greedy_p only runs inside the perturb experiment");
  }
  if (perturb.noise_base < 0.0) issues.push_back("noise_base: must be >= 0");
  if (perturb.noise_slope < 0.0) issues.push_back("noise_slope: must be >= 0");
  if (sdp.max_iters < 1) issues.push_back("sdp_iters: must be >= 1");
  if (sdp.rounding_trials < 1) issues.push_back("sdp_trials: must be >= 1");
  return issues;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::string out =
      "experiment,method,r,replicate,seed,param,expected_variance,improvement_vs_naive\n";
  for (const auto& row : rows) {
    out += row.experiment + "," + row.method + "," + std::to_string(row.r) + "," +
           std::to_string(row.replicate) + "," + std::to_string(row.seed) + "," +
           format_double(row.param) + "," + format_double(row.expected_variance) + "," +
           format_double(row.improvement) + "\n";
  }
  return out;
}

namespace {

enum : std::uint64_t { kGraphStream = 1, kPartitionStream = 2, kPerturbStream = 3 };

struct CellContext {
  const ExperimentConfig* cfg = nullptr;
  const SocialGraph* fixed_graph = nullptr;
  std::vector<double> params;
  int param_count() const { return static_cast<int>(params.size()); }
};

std::vector<ExperimentRow> run_cell(const CellContext& ctx, int pi, int rep) {
  const ExperimentConfig& cfg = *ctx.cfg;
  const double param = ctx.params[pi];
  Rng root(cfg.seed);

  // One generator stream per replicate, shared across the parameter grid: the
  // inward sweep then reuses the replicate's topology unchanged, and the ratio
  // sweep reuses its per-pair uniforms, so lowering p_low only removes cross
  // edges (nested edge sets make the reported trends monotone-coupled).
  const std::uint64_t graph_seed =
      root.fork(kGraphStream).fork(static_cast<std::uint64_t>(rep)).key();

  std::optional<SocialGraph> generated;
  const SocialGraph* graph = ctx.fixed_graph;
  if (!graph) {
    PlantedPartitionConfig pc;
    pc.n = cfg.n;
    pc.k = cfg.k;
    pc.p_high = cfg.p_high;
    pc.p_low = (cfg.kind == "sweep_ratio") ? cfg.p_high / param : cfg.p_low;
    pc.seed = graph_seed;
    const ValueSpec inward_spec =
        (cfg.kind == "sweep_inward") ? ValueSpec::constant(param) : cfg.inward_spec;
    generated.emplace(generate_planted_partition(pc, cfg.lambda_spec, inward_spec).graph);
    graph = &*generated;
  }

  const SimilarityMatrix sim = exact_similarity(*graph, cfg.mu0, cfg.solver, cfg.sweep_mode);
  const AssistantGraph ga = build_assistant_graph(sim);

  std::vector<Method> methods = cfg.methods;
  if (cfg.kind == "perturb")
    methods = {Method::Naive, Method::Greedy, Method::GreedyPerturbed};

  std::optional<AssistantGraph> ga_perturbed;
  if (std::find(methods.begin(), methods.end(), Method::GreedyPerturbed) != methods.end()) {
    const std::uint64_t perturb_seed = root.fork(kPerturbStream)
                                           .fork(static_cast<std::uint64_t>(pi))
                                           .fork(static_cast<std::uint64_t>(rep))
                                           .key();
    ga_perturbed = build_assistant_graph(
        perturb_similarities(sim, *graph, perturb_seed, cfg.perturb));
  }

  std::vector<ExperimentRow> rows;
  for (int r : cfg.r_values) {
    const double ev_naive = expected_variance_naive(sim, r);
    for (Method m : methods) {
      const std::uint64_t part_seed = root.fork(kPartitionStream)
                                          .fork(static_cast<std::uint64_t>(m))
                                          .fork(static_cast<std::uint64_t>(r))
                                          .fork(static_cast<std::uint64_t>(pi))
                                          .fork(static_cast<std::uint64_t>(rep))
                                          .key();
      double ev = 0.0;
      switch (m) {
        case Method::Naive:
          ev = ev_naive;
          break;
        case Method::Greedy:
          ev = expected_variance_simple(sim, greedy_partition(ga, r, part_seed));
          break;
        case Method::Balanced:
          ev = expected_variance_simple(sim, balanced_greedy_partition(ga, r, part_seed));
          break;
        case Method::Sdp:
          ev = expected_variance_simple(sim, sdp_partition(ga, r, part_seed, cfg.sdp).partition);
          break;
        case Method::BruteForce:
          ev = expected_variance_simple(sim, brute_force_optimal(ga, r));
          break;
        case Method::GreedyPerturbed:
          // partition found on noisy similarities, evaluated on the true ones
          ev = expected_variance_simple(sim, greedy_partition(*ga_perturbed, r, part_seed));
          break;
      }
      ExperimentRow row;
      row.experiment = cfg.kind;
      row.method = method_name(m);
      row.r = r;
      row.replicate = rep;
      row.seed = part_seed;
      row.param = (cfg.kind == "sweep_r") ? static_cast<double>(r)
                 : (cfg.kind == "perturb") ? cfg.perturb.noise_base
                                           : param;
      row.expected_variance = ev;
      row.improvement = (ev_naive > 0.0) ? 1.0 - ev / ev_naive : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  auto issues = cfg.validate();
  if (!issues.empty()) throw ConfigError(std::move(issues));

  CellContext ctx;
  ctx.cfg = &cfg;
  std::optional<SocialGraph> fixed;
  if (!cfg.graph_path.empty()) {
    fixed.emplace(load_graph(cfg.graph_path, cfg.meta_path));
    ctx.fixed_graph = &*fixed;
  }

  if (cfg.kind == "sweep_ratio") ctx.params = cfg.ratios;
  else if (cfg.kind == "sweep_inward") ctx.params = cfg.inwards;
  else ctx.params = {0.0};  // sweep_r and perturb have a single parameter cell

  const int P = ctx.param_count();
  const int R = cfg.replicates;
  std::vector<std::vector<ExperimentRow>> cells(static_cast<std::size_t>(P) * R);
  std::exception_ptr failure = nullptr;

#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(dynamic) num_threads(cfg.threads)
#endif
  for (int pi = 0; pi < P; ++pi) {
    for (int rep = 0; rep < R; ++rep) {
      try {
        cells[static_cast<std::size_t>(pi) * R + rep] = run_cell(ctx, pi, rep);
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ExperimentRow> rows;
  for (const auto& cell : cells) rows.insert(rows.end(), cell.begin(), cell.end());
  return rows;
}

}  // namespace ops
