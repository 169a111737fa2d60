#pragma once

#include <cstdint>

#include "ops/graph.hpp"
#include "ops/partition.hpp"

namespace ops {

struct SdpConfig {
  int max_nodes = 500;       // requests above this are an error
  int rank_offset = 4;       // factor rank d = min(n, r + rank_offset)
  int max_iters = 2000;      // gradient ascent iterations (500..5000 is sane)
  int rounding_trials = 20;  // independent Gaussian roundings, best kept
  double grad_tol = 1e-6;    // tangent gradient norm declaring convergence
  double penalty_init = 1.0;
  double penalty_growth = 2.0;  // multiplier applied every penalty_period iters
  int penalty_period = 100;
};

struct SdpResult {
  SimplePartition partition;
  bool converged = false;
  double grad_norm = 0.0;       // tangent gradient norm at the last iterate
  int iters = 0;
  double relaxation_value = 0.0;  // relaxed cut objective at the last iterate
  double rounded_cost = 0.0;      // g of the returned partition
};

// Low-rank vector relaxation of the r-way cut underlying the partition
// objective: unit vectors v_i with pairwise inner products >= -1/(r-1),
// maximizing sum_{i<j} w_ij (r-1)/r (1 - v_i . v_j). Solved by projected
// gradient ascent on a rank-d factor with a growing quadratic penalty on
// constraint violations, then rounded by assigning each node to the nearest
// of r independent Gaussian directions. Each rounded candidate is polished by
// the deterministic local_reassignment rounds (nearest-direction assignment
// merges vector clusters whenever roughly r of them compete for r directions,
// which the cut objective barely notices but the partition objective does);
// the best polished candidate by g is returned, empty groups repaired as in
// the greedy partitioner. Non-convergence is reported in the result, not
// thrown.
SdpResult sdp_partition(const AssistantGraph& ga, int r, std::uint64_t seed,
                        const SdpConfig& cfg = {});

}  // namespace ops
