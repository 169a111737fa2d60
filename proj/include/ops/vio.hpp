#pragma once

#include <cstdint>
#include <vector>

#include "ops/graph.hpp"
#include "ops/rng.hpp"

namespace ops {

struct VioParams {
  double mu0 = 0.5;  // innate opinions are i.i.d. Bernoulli(mu0)
};

struct OpinionAssignment {
  std::vector<std::uint8_t> values;  // one binary opinion per node
  int n() const { return static_cast<int>(values.size()); }
};

// absorber[i] = node whose innate reset determined the steady-state opinion
// observed at i (walkers that coalesced share one absorber).
struct AbsorptionTrace {
  std::vector<int> absorber;
};

struct SteadyStateSample {
  OpinionAssignment opinions;
  AbsorptionTrace trace;
};

// scale * sum_i 1/(lambda_i p_i): a horizon by which every node has reset to
// its innate opinion many times over, so the forward state is near-stationary.
double default_horizon(const SocialGraph& g, double scale = 5.0);

// Event-driven forward run of the opinion dynamics to the given horizon:
// events arrive at rate sum(lambda); the owner resets to its innate opinion
// with probability p_i, otherwise copies a weighted out-neighbor's current
// opinion. Expressed opinions start at the innate draw.
OpinionAssignment simulate_forward(const SocialGraph& g, const VioParams& params,
                                   double horizon, std::uint64_t seed);

// Draws exact stationary opinion vectors by running the dual absorbing walk:
// one walker per node, walkers at the same node merged; at each step an
// occupied node is chosen proportional to lambda, absorbs with probability
// p_i, and otherwise moves every walker on it to a weighted out-neighbor.
// Precomputes per-node cumulative weights once; draws share them read-only.
class SteadyStateSampler {
 public:
  explicit SteadyStateSampler(const SocialGraph& g);

  SteadyStateSample draw(const VioParams& params, Rng& rng) const;
  SteadyStateSample draw(const VioParams& params, std::uint64_t seed) const {
    Rng rng(seed);
    return draw(params, rng);
  }

  const SocialGraph& graph() const { return g_; }

 private:
  const SocialGraph& g_;
  std::vector<std::vector<double>> cum_;  // per-node cumulative edge weights
};

// One-shot convenience wrapper around SteadyStateSampler.
SteadyStateSample sample_steady_state(const SocialGraph& g, const VioParams& params,
                                      std::uint64_t seed);

// Fraction of draws with equal opinions, per pair (unit diagonal). Each draw
// uses the stream fork(seed, sample_id), so results are independent of thread
// count and of the order samples are drawn in.
SimilarityMatrix empirical_similarity(const SocialGraph& g, const VioParams& params,
                                      int samples, std::uint64_t seed);

}  // namespace ops
