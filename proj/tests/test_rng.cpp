#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "ops/rng.hpp"

using ops::Rng;

TEST_CASE("same key reproduces the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different keys give different streams") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("fork is independent of the parent's draw position") {
  Rng parent(7);
  Rng child_before = parent.fork(3);
  parent.next_u64();
  parent.next_u64();
  Rng child_after = parent.fork(3);
  CHECK(child_before.next_u64() == child_after.next_u64());
}

TEST_CASE("forks with different tags diverge, two-level fork composes") {
  Rng root(9);
  CHECK(root.fork(1).next_u64() != root.fork(2).next_u64());
  Rng two_step = root.fork(5).fork(6);
  Rng one_call = root.fork(5, 6);
  CHECK(two_step.next_u64() == one_call.next_u64());
}

TEST_CASE("uniform01 stays in [0,1) and has the right mean") {
  Rng rng(11);
  double sum = 0.0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // mean 0.5, sd of the mean = 1/sqrt(12 * trials) ~ 9.1e-4; allow 4 sigma
  CHECK(std::abs(sum / trials - 0.5) < 4.0 / std::sqrt(12.0 * trials));
}

TEST_CASE("uniform_int covers exactly [0, n) with near-uniform counts") {
  Rng rng(13);
  const int n = 7;
  std::vector<int> counts(n, 0);
  const int trials = 70000;
  for (int i = 0; i < trials; ++i) {
    std::uint64_t v = rng.uniform_int(n);
    REQUIRE(v < static_cast<std::uint64_t>(n));
    ++counts[static_cast<int>(v)];
  }
  for (int c : counts) CHECK(std::abs(c - trials / n) < 5 * std::sqrt(trials / n));
}

TEST_CASE("bernoulli hits its probability") {
  Rng rng(17);
  const double p = 0.3;
  const int trials = 100000;
  int hits = 0;
  for (int i = 0; i < trials; ++i)
    if (rng.bernoulli(p)) ++hits;
  double sd = std::sqrt(p * (1 - p) * trials);
  CHECK(std::abs(hits - p * trials) < 4 * sd);
}

TEST_CASE("exponential has the requested mean") {
  Rng rng(19);
  const double rate = 2.5;
  const int trials = 200000;
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    double x = rng.exponential(rate);
    REQUIRE(x >= 0.0);
    sum += x;
  }
  // sd of the mean = 1/(rate sqrt(trials))
  CHECK(std::abs(sum / trials - 1.0 / rate) < 4.0 / (rate * std::sqrt(double(trials))));
}

TEST_CASE("pick_cumulative respects the weights") {
  Rng rng(23);
  std::vector<double> cum = {1.0, 3.0, 6.0};  // weights 1, 2, 3
  std::vector<int> counts(3, 0);
  const int trials = 60000;
  for (int i = 0; i < trials; ++i) ++counts[static_cast<int>(rng.pick_cumulative(cum))];
  CHECK(std::abs(counts[0] - trials / 6.0) < 5 * std::sqrt(trials / 6.0));
  CHECK(std::abs(counts[1] - trials / 3.0) < 5 * std::sqrt(trials / 3.0));
  CHECK(std::abs(counts[2] - trials / 2.0) < 5 * std::sqrt(trials / 2.0));
}

TEST_CASE("shuffle is a permutation and depends on the key") {
  std::vector<int> v(20);
  std::iota(v.begin(), v.end(), 0);
  std::vector<int> a = v, b = v, c = v;
  Rng r1(31), r2(31), r3(32);
  r1.shuffle(a);
  r2.shuffle(b);
  r3.shuffle(c);
  CHECK(a == b);
  CHECK(a != c);
  std::vector<int> sorted_a = a;
  std::sort(sorted_a.begin(), sorted_a.end());
  CHECK(sorted_a == v);
}

TEST_CASE("uniform(lo, hi) spans the interval") {
  Rng rng(37);
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 10000; ++i) {
    double x = rng.uniform(-2.0, 3.0);
    REQUIRE(x >= -2.0);
    REQUIRE(x <= 3.0);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo < -1.9);
  CHECK(hi > 2.9);
}
