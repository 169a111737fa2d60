#include "ops/vio.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ops {

double default_horizon(const SocialGraph& g, double scale) {
  double total = 0.0;
  for (int i = 0; i < g.n(); ++i) total += 1.0 / (g.lambda(i) * g.inward(i));
  return scale * total;
}

OpinionAssignment simulate_forward(const SocialGraph& g, const VioParams& params,
                                   double horizon, std::uint64_t seed) {
  if (params.mu0 < 0.0 || params.mu0 > 1.0)
    throw std::invalid_argument("simulate_forward: mu0 must lie in [0,1]");
  if (horizon < 0.0) throw std::invalid_argument("simulate_forward: negative horizon");

  const int n = g.n();
  Rng rng(seed);

  std::vector<std::uint8_t> innate(n);
  for (int i = 0; i < n; ++i) innate[i] = rng.bernoulli(params.mu0) ? 1 : 0;
  std::vector<std::uint8_t> expressed = innate;

  std::vector<double> lambda_cum(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) lambda_cum[i] = (total += g.lambda(i));

  std::vector<std::vector<double>> edge_cum(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const Edge& e : g.out_edges(i)) edge_cum[i].push_back(acc += e.weight);
  }

  double t = rng.exponential(total);
  while (t <= horizon) {
    int owner = rng.pick_cumulative(lambda_cum);
    if (rng.bernoulli(g.inward(owner))) {
      expressed[owner] = innate[owner];
    } else {
      int pick = rng.pick_cumulative(edge_cum[owner]);
      expressed[owner] = expressed[g.out_edges(owner)[pick].to];
    }
    t += rng.exponential(total);
  }
  return {std::move(expressed)};
}

SteadyStateSampler::SteadyStateSampler(const SocialGraph& g) : g_(g), cum_(g.n()) {
  for (int i = 0; i < g.n(); ++i) {
    double acc = 0.0;
    for (const Edge& e : g.out_edges(i)) cum_[i].push_back(acc += e.weight);
  }
}

SteadyStateSample SteadyStateSampler::draw(const VioParams& params, Rng& rng) const {
  if (params.mu0 < 0.0 || params.mu0 > 1.0)
    throw std::invalid_argument("SteadyStateSampler: mu0 must lie in [0,1]");
  const int n = g_.n();

  std::vector<int> absorber(n, -1);
  std::vector<std::vector<int>> members(n);      // origin walkers per occupied node
  std::vector<int> active;                       // occupied nodes, unordered
  std::vector<int> slot(n);                      // node -> index into active
  for (int i = 0; i < n; ++i) {
    members[i].push_back(i);
    active.push_back(i);
    slot[i] = i;
  }

  auto deactivate = [&](int node) {
    int idx = slot[node];
    int last = active.back();
    active[idx] = last;
    slot[last] = idx;
    active.pop_back();
  };

  while (!active.empty()) {
    double total = 0.0;
    for (int node : active) total += g_.lambda(node);
    double u = rng.uniform01() * total;
    int pick = 0;
    double acc = 0.0;
    for (std::size_t idx = 0; idx < active.size(); ++idx) {
      acc += g_.lambda(active[idx]);
      if (u < acc || idx + 1 == active.size()) {
        pick = static_cast<int>(idx);
        break;
      }
    }
    const int node = active[pick];

    if (rng.bernoulli(g_.inward(node))) {
      for (int w : members[node]) absorber[w] = node;
      members[node].clear();
      deactivate(node);
    } else {
      const int to = g_.out_edges(node)[rng.pick_cumulative(cum_[node])].to;
      if (members[to].empty()) {
        members[to] = std::move(members[node]);
        members[node].clear();
        deactivate(node);
        active.push_back(to);
        slot[to] = static_cast<int>(active.size()) - 1;
      } else {
        for (int w : members[node]) members[to].push_back(w);
        members[node].clear();
        deactivate(node);
      }
    }
  }

  std::vector<std::uint8_t> innate(n);
  for (int i = 0; i < n; ++i) innate[i] = rng.bernoulli(params.mu0) ? 1 : 0;
  std::vector<std::uint8_t> opinions(n);
  for (int i = 0; i < n; ++i) opinions[i] = innate[absorber[i]];

  return {{std::move(opinions)}, {std::move(absorber)}};
}

SteadyStateSample sample_steady_state(const SocialGraph& g, const VioParams& params,
                                      std::uint64_t seed) {
  return SteadyStateSampler(g).draw(params, seed);
}

SimilarityMatrix empirical_similarity(const SocialGraph& g, const VioParams& params,
                                      int samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("empirical_similarity: samples must be positive");
  const int n = g.n();
  SteadyStateSampler sampler(g);
  Rng root(seed);

  const std::size_t pairs = static_cast<std::size_t>(n) * n;
  std::vector<std::uint64_t> agree(pairs, 0);

#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(pairs, 0);
#pragma omp for schedule(static)
    for (int s = 0; s < samples; ++s) {
      Rng rng = root.fork(static_cast<std::uint64_t>(s));
      SteadyStateSample sample = sampler.draw(params, rng);
      const auto& f = sample.opinions.values;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (f[i] == f[j]) ++local[static_cast<std::size_t>(i) * n + j];
    }
#pragma omp critical
    for (std::size_t p = 0; p < pairs; ++p) agree[p] += local[p];
  }
#else
  for (int s = 0; s < samples; ++s) {
    Rng rng = root.fork(static_cast<std::uint64_t>(s));
    SteadyStateSample sample = sampler.draw(params, rng);
    const auto& f = sample.opinions.values;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (f[i] == f[j]) ++agree[static_cast<std::size_t>(i) * n + j];
  }
#endif

  SquareMatrix sigma(n, 0.0);
  for (int i = 0; i < n; ++i) {
    sigma(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double v = static_cast<double>(agree[static_cast<std::size_t>(i) * n + j]) / samples;
      sigma(i, j) = sigma(j, i) = v;
    }
  }
  return {std::move(sigma)};
}

}  // namespace ops
