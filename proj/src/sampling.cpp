#include "ops/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ops/rng.hpp"

namespace ops {

EstimateReport naive_estimate(const OpinionAssignment& f, int r, std::uint64_t seed) {
  const int n = f.n();
  if (n == 0) throw std::invalid_argument("naive_estimate: empty assignment");
  if (r < 1) throw std::invalid_argument("naive_estimate: r must be >= 1");
  Rng rng(seed);
  EstimateReport report;
  double sum = 0.0;
  for (int t = 0; t < r; ++t) {
    int node = static_cast<int>(rng.uniform_int(n));
    report.sampled_nodes.emplace_back(0, node);
    sum += f.values[node];
  }
  report.estimate = sum / r;
  return report;
}

EstimateReport partitioned_estimate(const OpinionAssignment& f, const Partition& partition,
                                    std::uint64_t seed) {
  const int n = f.n();
  validate_partition(partition, n);
  Rng rng(seed);
  EstimateReport report;
  double estimate = 0.0;
  for (std::size_t k = 0; k < partition.groups.size(); ++k) {
    const auto& group = partition.groups[k];
    const int rk = partition.subsamples[k];
    double sum = 0.0;
    for (int t = 0; t < rk; ++t) {
      int node = group[rng.uniform_int(group.size())];
      report.sampled_nodes.emplace_back(static_cast<int>(k), node);
      sum += f.values[node];
    }
    estimate += (static_cast<double>(group.size()) / n) * (sum / rk);
  }
  report.estimate = estimate;
  return report;
}

double expected_variance_simple(const SimilarityMatrix& sim, const SimplePartition& p) {
  const int n = sim.n();
  validate_simple(p, n);
  double g = 0.0;
  for (const auto& group : p.groups) {
    const int size = static_cast<int>(group.size());
    for (int a = 0; a < size; ++a)
      for (int b = a + 1; b < size; ++b) g += 2.0 * (1.0 - sim.sigma(group[a], group[b]));
  }
  return g / (2.0 * n * n);
}

double expected_variance_naive(const SimilarityMatrix& sim, int r) {
  const int n = sim.n();
  if (r < 1) throw std::invalid_argument("expected_variance_naive: r must be >= 1");
  double vol = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) vol += 2.0 * (1.0 - sim.sigma(i, j));
  return vol / (2.0 * n * n * r);
}

double expected_variance_general(const SimilarityMatrix& sim, const MeanVector& mu,
                                 const Partition& partition, double consistency_tol) {
  const int n = sim.n();
  if (mu.n() != n) throw std::invalid_argument("expected_variance_general: mu size mismatch");
  validate_partition(partition, n);
  for (double m : mu.mu)
    if (m < 0.0 || m > 1.0)
      throw std::invalid_argument("expected_variance_general: means must lie in [0,1]");

  double total = 0.0;
  for (std::size_t k = 0; k < partition.groups.size(); ++k) {
    const auto& group = partition.groups[k];
    const int nk = static_cast<int>(group.size());
    double mean_sum = 0.0;
    for (int v : group) mean_sum += mu.mu[v];
    double second_moment = mean_sum;  // E[f_i^2] = mu_i on the diagonal
    for (int a = 0; a < nk; ++a) {
      for (int b = a + 1; b < nk; ++b) {
        const int i = group[a], j = group[b];
        double e = 0.5 * (sim.sigma(i, j) + mu.mu[i] + mu.mu[j] - 1.0);
        const double lo = std::max(0.0, mu.mu[i] + mu.mu[j] - 1.0);
        const double hi = std::min(mu.mu[i], mu.mu[j]);
        if (e < lo - consistency_tol || e > hi + consistency_tol)
          throw std::invalid_argument(
              "expected_variance_general: sigma and mu imply an infeasible pair moment");
        e = std::min(hi, std::max(lo, e));
        second_moment += 2.0 * e;
      }
    }
    const double ev = mean_sum / nk - second_moment / (static_cast<double>(nk) * nk);
    const double weight = static_cast<double>(nk) / n;
    total += weight * weight * ev / partition.subsamples[k];
  }
  return total;
}

double fixed_f_variance(const OpinionAssignment& f, const Partition& partition) {
  const int n = f.n();
  validate_partition(partition, n);
  double total = 0.0;
  for (std::size_t k = 0; k < partition.groups.size(); ++k) {
    const auto& group = partition.groups[k];
    double sum = 0.0;
    for (int v : group) sum += f.values[v];
    const double m = sum / group.size();
    const double weight = static_cast<double>(group.size()) / n;
    total += weight * weight * m * (1.0 - m) / partition.subsamples[k];
  }
  return total;
}

SimilarityMatrix perturb_similarities(const SimilarityMatrix& sim, const SocialGraph& g,
                                      std::uint64_t seed, const PerturbConfig& cfg) {
  const int n = sim.n();
  if (g.n() != n) throw std::invalid_argument("perturb_similarities: graph size mismatch");
  if (cfg.noise_base < 0.0 || cfg.noise_slope < 0.0)
    throw std::invalid_argument("perturb_similarities: noise terms must be non-negative");

  Rng root(seed);
  SquareMatrix out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double v;
      if (cfg.disconnected_to_half && !g.has_edge(i, j) && !g.has_edge(j, i)) {
        v = 0.5;
      } else {
        const double s = sim.sigma(i, j);
        const double range = cfg.noise_base + cfg.noise_slope * s;
        Rng pair_rng = root.fork(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
        v = std::min(1.0, std::max(0.0, s + pair_rng.uniform(-range, range)));
      }
      out(i, j) = out(j, i) = v;
    }
  }
  return {std::move(out)};
}

}  // namespace ops
