#include <cmath>
#include <vector>

#include "doctest.h"
#include "ops/similarity.hpp"
#include "ops/vio.hpp"
#include "test_util.hpp"

using namespace ops;

namespace {

SocialGraph two_node() {
  return SocialGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, {1.0, 1.0}, {0.5, 0.5});
}

}  // namespace

TEST_CASE("a single always-resetting node keeps its innate opinion") {
  SocialGraph g(1, {}, {2.0}, {1.0});
  VioParams params{0.7};
  int ones = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    SteadyStateSample s = sample_steady_state(g, params, 900 + t);
    REQUIRE(s.trace.absorber[0] == 0);  // only possible absorber
    ones += s.opinions.values[0];
    OpinionAssignment f = simulate_forward(g, params, default_horizon(g), 900 + t);
    REQUIRE((f.values[0] == 0 || f.values[0] == 1));
  }
  double sd = std::sqrt(0.7 * 0.3 / trials);
  CHECK(std::abs(ones / double(trials) - 0.7) < 3 * sd);
}

TEST_CASE("p = 1 everywhere freezes everyone at their innate opinion") {
  SocialGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}, {1, 1, 1}, {1.0, 1.0, 1.0});
  for (int t = 0; t < 50; ++t) {
    SteadyStateSample s = sample_steady_state(g, {0.5}, 50 + t);
    for (int i = 0; i < 3; ++i) CHECK(s.trace.absorber[i] == i);
  }
}

TEST_CASE("steady-state draws are deterministic in the seed") {
  ops::Rng rng(42);
  SocialGraph g = testutil::random_graph(rng, 6, 0.2, 0.9);
  SteadyStateSample a = sample_steady_state(g, {0.5}, 77);
  SteadyStateSample b = sample_steady_state(g, {0.5}, 77);
  SteadyStateSample c = sample_steady_state(g, {0.5}, 78);
  CHECK(a.opinions.values == b.opinions.values);
  CHECK(a.trace.absorber == b.trace.absorber);
  bool all_equal = a.opinions.values == c.opinions.values && a.trace.absorber == c.trace.absorber;
  CHECK(!all_equal);
}

TEST_CASE("coalesced walkers report one shared absorber") {
  ops::Rng rng(43);
  SocialGraph g = testutil::random_graph(rng, 5, 0.2, 0.9);
  for (int t = 0; t < 200; ++t) {
    SteadyStateSample s = sample_steady_state(g, {0.5}, 5000 + t);
    for (int i = 0; i < g.n(); ++i) {
      REQUIRE(s.trace.absorber[i] >= 0);
      REQUIRE(s.trace.absorber[i] < g.n());
      // the opinion observed at i is the absorber's innate draw, so equal
      // absorbers force equal opinions
      for (int j = i + 1; j < g.n(); ++j)
        if (s.trace.absorber[i] == s.trace.absorber[j])
          CHECK(s.opinions.values[i] == s.opinions.values[j]);
    }
  }
}

TEST_CASE("2-node same-absorber frequency matches rho = 2/3") {
  SocialGraph g = two_node();
  const int draws = 100000;
  SteadyStateSampler sampler(g);
  Rng root(314);
  int same = 0;
  for (int s = 0; s < draws; ++s) {
    Rng rng = root.fork(s);
    SteadyStateSample sample = sampler.draw({0.5}, rng);
    same += sample.trace.absorber[0] == sample.trace.absorber[1];
  }
  double rho = 2.0 / 3.0;
  double sd = std::sqrt(rho * (1 - rho) / draws);
  CHECK(std::abs(same / double(draws) - rho) < 3 * sd);
}

TEST_CASE("forward simulation agrees with the similarity sigma12 = 5/6") {
  SocialGraph g = two_node();
  const double horizon = default_horizon(g);
  CHECK(horizon == doctest::Approx(5.0 * 4.0));  // 5 * sum 1/(lambda p)
  const int runs = 10000;
  int agree = 0, ones = 0;
  for (int t = 0; t < runs; ++t) {
    OpinionAssignment f = simulate_forward(g, {0.5}, horizon, 7000 + t);
    agree += f.values[0] == f.values[1];
    ones += f.values[0];
  }
  double sigma = 5.0 / 6.0;
  double sd = std::sqrt(sigma * (1 - sigma) / runs);
  CHECK(std::abs(agree / double(runs) - sigma) < 3 * sd);
  // marginal stays Bernoulli(mu0)
  double sdm = std::sqrt(0.25 / runs);
  CHECK(std::abs(ones / double(runs) - 0.5) < 3 * sdm);
}

TEST_CASE("empirical similarity converges to the exact one") {
  ops::Rng rng(44);
  SocialGraph g = testutil::random_graph(rng, 5, 0.25, 0.9);
  const double mu0 = 0.4;
  SimilarityMatrix exact = exact_similarity(g, mu0);
  const int draws = 20000;
  SimilarityMatrix emp = empirical_similarity(g, {mu0}, draws, 999);
  for (int i = 0; i < g.n(); ++i) {
    CHECK(emp.sigma(i, i) == 1.0);
    for (int j = i + 1; j < g.n(); ++j) {
      double s = exact.sigma(i, j);
      double sd = std::sqrt(std::max(s * (1 - s), 1e-12) / draws);
      CHECK(std::abs(emp.sigma(i, j) - s) < 3.5 * sd);
      CHECK(emp.sigma(i, j) == emp.sigma(j, i));
    }
  }
}

TEST_CASE("steady-state opinion marginals match mu0") {
  ops::Rng rng(45);
  SocialGraph g = testutil::random_graph(rng, 6, 0.2, 0.9);
  const double mu0 = 0.3;
  const int draws = 30000;
  SteadyStateSampler sampler(g);
  Rng root(2718);
  std::vector<int> ones(g.n(), 0);
  for (int s = 0; s < draws; ++s) {
    Rng r = root.fork(s);
    SteadyStateSample sample = sampler.draw({mu0}, r);
    for (int i = 0; i < g.n(); ++i) ones[i] += sample.opinions.values[i];
  }
  double sd = std::sqrt(mu0 * (1 - mu0) / draws);
  for (int i = 0; i < g.n(); ++i)
    CHECK(std::abs(ones[i] / double(draws) - mu0) < 3.5 * sd);
}

TEST_CASE("empirical similarity rejects a non-positive draw count") {
  SocialGraph g = two_node();
  CHECK_THROWS_AS(empirical_similarity(g, {0.5}, 0, 1), std::invalid_argument);
}
