#include <cmath>
#include <vector>

#include "doctest.h"
#include "ops/similarity.hpp"
#include "test_util.hpp"

using namespace ops;

namespace {

// 2-node symmetric fixture: unit edges both ways, equal lambda, p = 1/2.
// Hand-solved: Q11 = 1/2 + 1/2 Q21 and Q21 = 1/2 Q11 give Q11 = 2/3, Q12 = 1/3;
// h = 1 - (4/9 + 1/9) = 4/9; the pair (1,2) meets at either node with
// probability 1/4 each, so M12 = 1/2 * 4/9 * 1/2 = 2/9; rho12 = 2*(2/9) + 2/9
// = 2/3; sigma12 at mu0 = 1/2 is 1 - 1/2 * 1/3 = 5/6.
SocialGraph two_node() {
  return SocialGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, {1.0, 1.0}, {0.5, 0.5});
}

// 3-node asymmetric fixture (distinct weights, lambdas, inward probabilities).
// Expected values below were derived externally by solving the absorption and
// pair-meeting linear systems with dense linear algebra, frozen to 17
// significant digits; the in-repo dense oracles must reproduce them too.
SocialGraph three_node() {
  return SocialGraph(3,
                     {{0, 1, 2.0}, {0, 2, 1.0}, {1, 0, 1.0}, {1, 2, 3.0}, {2, 0, 1.0}},
                     {1.0, 2.0, 0.5}, {0.3, 0.6, 0.8});
}

const double kQ3[3][3] = {
    {0.3414264036418816, 0.31866464339908945, 0.3399089529590288},
    {0.05462822458270105, 0.6509863429438543, 0.2943854324734446},
    {0.0682852807283763, 0.06373292867981788, 0.8679817905918057}};
const double kH3[3] = {0.6663427596417988, 0.4865697555269515, 0.2378828454387829};
const double kM3[3] = {0.14636957298508124, 0.10358845757846018,
                       0.07123374243098797};  // pairs (0,1), (0,2), (1,2)
const double kTensor3[3][3] = {
    {0.0812322361786009, 0.15645406110245205, 0.06774446583743367},   // pair (0,1)
    {0.06940496928577976, 0.00199667899310331, 0.236963010502939},    // pair (0,2)
    {0.00880168699000642, 0.00641789676354634, 0.2616668194737325}};  // pair (1,2)
const double kRho3[3] = {0.472531666192014, 0.4422470680173234,
                         0.37197450705113017};  // pairs (0,1), (0,2), (1,2)
const double kSigma3[3] = {0.7784632998006459, 0.7657437685672759,
                           0.7362292929614747};  // mu0 = 0.3

}  // namespace

TEST_CASE("2-node fixture: absorption, bonus, meeting values, correlation") {
  SocialGraph g = two_node();
  AbsorptionMatrix q = compute_Q(g);
  CHECK(std::abs(q.q(0, 0) - 2.0 / 3.0) < 1e-9);
  CHECK(std::abs(q.q(0, 1) - 1.0 / 3.0) < 1e-9);
  CHECK(std::abs(q.q(1, 1) - 2.0 / 3.0) < 1e-9);

  std::vector<double> h = coalescence_bonus(q);
  CHECK(std::abs(h[0] - 4.0 / 9.0) < 1e-9);
  CHECK(std::abs(h[1] - 4.0 / 9.0) < 1e-9);

  MeetingValues m = compute_meeting_values(g, q);
  CHECK(std::abs(m.m(0, 1) - 2.0 / 9.0) < 1e-9);
  CHECK(std::abs(m.m(0, 0) - 4.0 / 9.0) < 1e-9);

  MeetingProbTensor t = compute_meeting_probs_bruteforce(g);
  CHECK(std::abs(t(0, 1, 0) - 0.25) < 1e-12);
  CHECK(std::abs(t(0, 1, 1) - 0.25) < 1e-12);

  CorrelationMatrix rho = correlation(q, m);
  CHECK(std::abs(rho.rho(0, 1) - 2.0 / 3.0) < 1e-9);
  CHECK(rho.rho(0, 0) == 1.0);

  SimilarityMatrix sigma = similarity(rho, 0.5);
  CHECK(std::abs(sigma.sigma(0, 1) - 5.0 / 6.0) < 1e-9);
  CHECK(sigma.sigma(1, 1) == 1.0);

  SimilarityMatrix direct = exact_similarity(g, 0.5);
  CHECK(std::abs(direct.sigma(0, 1) - 5.0 / 6.0) < 1e-9);
}

TEST_CASE("3-node fixture matches externally derived values") {
  SocialGraph g = three_node();
  const int pi[3][2] = {{0, 1}, {0, 2}, {1, 2}};

  for (bool dense : {false, true}) {
    CAPTURE(dense);
    AbsorptionMatrix q = dense ? compute_Q_dense(g) : compute_Q(g);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(q.q(i, j) - kQ3[i][j]) < 1e-9);

    std::vector<double> h = coalescence_bonus(q);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(h[i] - kH3[i]) < 1e-9);

    MeetingValues m = compute_meeting_values(g, q);
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(m.m(pi[k][0], pi[k][1]) - kM3[k]) < 1e-9);

    CorrelationMatrix rho = correlation(q, m);
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(rho.rho(pi[k][0], pi[k][1]) - kRho3[k]) < 1e-9);

    SimilarityMatrix sigma = similarity(rho, 0.3);
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(sigma.sigma(pi[k][0], pi[k][1]) - kSigma3[k]) < 1e-9);
  }

  MeetingProbTensor t = compute_meeting_probs_bruteforce(g);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      CHECK(std::abs(t(pi[k][0], pi[k][1], l) - kTensor3[k][l]) < 1e-9);
      CHECK(t(pi[k][0], pi[k][1], l) == t(pi[k][1], pi[k][0], l));
    }
}

TEST_CASE("absorption rows are stochastic and dominated by the inward reset") {
  ops::Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    SocialGraph g = testutil::random_graph(rng, 3 + static_cast<int>(rng.uniform_int(6)),
                                           0.15, 0.95);
    AbsorptionMatrix q = compute_Q(g);
    for (int i = 0; i < g.n(); ++i) {
      double row = 0.0;
      for (int k = 0; k < g.n(); ++k) {
        REQUIRE(q.q(i, k) >= 0.0);
        row += q.q(i, k);
      }
      CHECK(std::abs(row - 1.0) < 1e-8);
      CHECK(q.q(i, i) >= g.inward(i) - 1e-12);
    }
  }
}

TEST_CASE("iterative Q agrees with the dense solve on random graphs") {
  ops::Rng rng(202);
  for (int trial = 0; trial < 25; ++trial) {
    SocialGraph g = testutil::random_graph(rng, 3 + static_cast<int>(rng.uniform_int(6)),
                                           0.15, 0.95);
    AbsorptionMatrix qi = compute_Q(g);
    AbsorptionMatrix qd = compute_Q_dense(g);
    CHECK(max_abs_diff(qi.q, qd.q) < 1e-8);
  }
}

TEST_CASE("meeting values match the brute-force tensor aggregation") {
  ops::Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    SocialGraph g = testutil::random_graph(rng, 3 + static_cast<int>(rng.uniform_int(6)),
                                           0.15, 0.95);
    AbsorptionMatrix q = compute_Q_dense(g);
    std::vector<double> h = coalescence_bonus(q);
    MeetingProbTensor t = compute_meeting_probs_bruteforce(g);

    // oracle: M(i,j) = sum_l Pr[first meeting at l] * h_l
    SquareMatrix oracle(g.n());
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) {
        double v = 0.0;
        for (int l = 0; l < g.n(); ++l) v += t(i, j, l) * h[l];
        oracle(i, j) = v;
      }

    MeetingValues gs = compute_meeting_values(g, q);
    MeetingValues jc = compute_meeting_values_jacobi(g, q);
    CHECK(max_abs_diff(gs.m, oracle) < 1e-8);
    CHECK(max_abs_diff(jc.m, oracle) < 1e-8);
  }
}

TEST_CASE("meeting tensor is a sub-probability over meeting places") {
  ops::Rng rng(404);
  SocialGraph g = testutil::random_graph(rng, 6, 0.2, 0.9);
  MeetingProbTensor t = compute_meeting_probs_bruteforce(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      double sum = 0.0;
      for (int l = 0; l < g.n(); ++l) {
        REQUIRE(t(i, j, l) >= -1e-14);
        sum += t(i, j, l);
      }
      CHECK(sum <= 1.0 + 1e-10);
      if (i == j) {
        // walkers that start together have already met exactly there
        CHECK(std::abs(t(i, i, i) - 1.0) < 1e-12);
        CHECK(std::abs(sum - 1.0) < 1e-12);
      }
    }
}

TEST_CASE("solver reports non-convergence instead of returning garbage") {
  SocialGraph g = two_node();
  SolverConfig cfg;
  cfg.tol = 1e-14;
  cfg.max_sweeps = 2;
  CHECK_THROWS_AS(compute_Q(g, cfg), SolverError);
  try {
    compute_Q(g, cfg);
  } catch (const SolverError& e) {
    CHECK(e.sweeps() == 2);
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("edge-weight scale does not matter, only relative weights do") {
  std::vector<std::tuple<int, int, double>> edges = {
      {0, 1, 2.0}, {0, 2, 1.0}, {1, 0, 1.0}, {1, 2, 3.0}, {2, 0, 1.0}};
  std::vector<std::tuple<int, int, double>> scaled;
  for (auto [a, b, w] : edges) scaled.emplace_back(a, b, 10.0 * w);
  SocialGraph g1(3, edges, {1.0, 2.0, 0.5}, {0.3, 0.6, 0.8});
  SocialGraph g2(3, scaled, {1.0, 2.0, 0.5}, {0.3, 0.6, 0.8});
  SimilarityMatrix s1 = exact_similarity(g1, 0.4);
  SimilarityMatrix s2 = exact_similarity(g2, 0.4);
  CHECK(max_abs_diff(s1.sigma, s2.sigma) < 1e-12);
}

TEST_CASE("mu0 rescales all assistant weights by one common factor") {
  // 1 - sigma = 2 mu0 (1-mu0) (1 - rho): for fixed rho, changing mu0 scales
  // every pairwise weight identically, so partition argmins are unaffected.
  ops::Rng rng(505);
  SocialGraph g = testutil::random_graph(rng, 6, 0.2, 0.9);
  SimilarityMatrix a = exact_similarity(g, 0.5);
  SimilarityMatrix b = exact_similarity(g, 0.2);
  const double expected = (2 * 0.2 * 0.8) / (2 * 0.5 * 0.5);
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j) {
      double wa = 1.0 - a.sigma(i, j), wb = 1.0 - b.sigma(i, j);
      if (wa > 1e-12) CHECK(std::abs(wb / wa - expected) < 1e-6);
    }
}

TEST_CASE("pipeline sweep modes agree") {
  ops::Rng rng(606);
  SocialGraph g = testutil::random_graph(rng, 7, 0.2, 0.9);
  SimilarityMatrix gs = exact_similarity(g, 0.5, {}, SweepMode::GaussSeidel);
  SimilarityMatrix jc = exact_similarity(g, 0.5, {}, SweepMode::Jacobi);
  CHECK(max_abs_diff(gs.sigma, jc.sigma) < 1e-8);
}
