#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ops/graph.hpp"
#include "ops/partition.hpp"
#include "ops/vio.hpp"

namespace ops {

struct EstimateReport {
  double estimate = 0.0;
  std::vector<std::pair<int, int>> sampled_nodes;  // (group index, node id)
};

struct MeanVector {
  std::vector<double> mu;  // per-node expected opinion
  int n() const { return static_cast<int>(mu.size()); }
};

// Mean of r uniform with-replacement draws over all nodes.
EstimateReport naive_estimate(const OpinionAssignment& f, int r, std::uint64_t seed);

// Weighted combination of per-group naive estimates: each group contributes
// (n_k / n) times the mean of its r_k uniform within-group draws.
EstimateReport partitioned_estimate(const OpinionAssignment& f, const Partition& partition,
                                    std::uint64_t seed);

// Expected sample variance of the partitioned estimator over the opinion
// model, for a simple partition: g(P) / (2 n^2), independent of node means.
double expected_variance_simple(const SimilarityMatrix& sim, const SimplePartition& p);

// Same for the one-group naive design with r draws: total weight volume
// divided by (2 n^2 r).
double expected_variance_naive(const SimilarityMatrix& sim, int r);

// General design: sum_k (n_k/n)^2 / r_k * E[v_k], where E[v_k] is the expected
// within-group variance expressed through sigma and the node means via
// E[f_i f_j] = (sigma_ij + mu_i + mu_j - 1) / 2. Pairs whose implied E[f_i f_j]
// leaves the feasible interval [max(0, mu_i+mu_j-1), min(mu_i, mu_j)] by more
// than consistency_tol are an error.
double expected_variance_general(const SimilarityMatrix& sim, const MeanVector& mu,
                                 const Partition& partition, double consistency_tol = 1e-9);

// Sample variance of the partitioned estimator conditioned on a fixed opinion
// vector: sum_k (n_k/n)^2 * m_k (1 - m_k) / r_k with m_k the group mean.
double fixed_f_variance(const OpinionAssignment& f, const Partition& partition);

struct PerturbConfig {
  double noise_base = 0.1;
  double noise_slope = 0.3;
  bool disconnected_to_half = true;  // pairs with no arc either way get 0.5
};

// Measurement-noise model for robustness studies: every connected unordered
// pair receives sigma' = clamp(sigma + e, 0, 1) with e drawn once from
// U[-(base + slope * sigma), +(base + slope * sigma)] on the pair's own
// derived stream; disconnected pairs carry no signal and collapse to 0.5.
SimilarityMatrix perturb_similarities(const SimilarityMatrix& sim, const SocialGraph& g,
                                      std::uint64_t seed, const PerturbConfig& cfg = {});

}  // namespace ops
