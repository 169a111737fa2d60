#include "ops/sdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ops/rng.hpp"

namespace ops {

namespace {

// relaxed objective plus penalty at gram matrix G: sum_{i<j} wt_ij (1 - G_ij)
// minus penalty * sum_{i<j} max(0, c - G_ij)^2
double objective(const Eigen::MatrixXd& wt, const Eigen::MatrixXd& gram, double c,
                 double penalty, double* relaxed_out) {
  const int n = static_cast<int>(wt.rows());
  double relaxed = 0.0, violation = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      relaxed += wt(i, j) * (1.0 - gram(i, j));
      const double h = c - gram(i, j);
      if (h > 0.0) violation += h * h;
    }
  }
  if (relaxed_out) *relaxed_out = relaxed;
  return relaxed - penalty * violation;
}

void normalize_rows(Eigen::MatrixXd& v) {
  for (int i = 0; i < v.rows(); ++i) {
    double norm = v.row(i).norm();
    if (norm <= 0.0) {
      v(i, 0) = 1.0;
      norm = 1.0;
    }
    v.row(i) /= norm;
  }
}

}  // namespace

SdpResult sdp_partition(const AssistantGraph& ga, int r, std::uint64_t seed,
                        const SdpConfig& cfg) {
  const int n = ga.n();
  if (r < 1 || r > n) throw std::invalid_argument("sdp_partition: need 1 <= r <= n");
  if (n > cfg.max_nodes)
    throw std::invalid_argument("sdp_partition: instance exceeds the node cap");

  SdpResult result;
  if (r == 1) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    result.partition.groups.push_back(std::move(all));
    result.converged = true;
    result.rounded_cost = cost(ga, result.partition);
    return result;
  }

  const int d = std::min(n, r + cfg.rank_offset);
  const double c = -1.0 / (r - 1);
  const double scale = static_cast<double>(r - 1) / r;

  Eigen::MatrixXd wt(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) wt(i, j) = (i == j) ? 0.0 : scale * ga.weight(i, j);

  Rng root(seed);
  enum : std::uint64_t { kInitStream = 1, kRoundStream = 2 };

  Eigen::MatrixXd v(n, d);
  {
    Rng init = root.fork(kInitStream);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) v(i, k) = init.normal();
    normalize_rows(v);
  }

  Eigen::MatrixXd gram = v * v.transpose();
  double penalty = cfg.penalty_init;
  double value = objective(wt, gram, c, penalty, &result.relaxation_value);
  double step = 0.25;
  bool stalled = false;

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    if (iter > 0 && iter % cfg.penalty_period == 0) {
      penalty *= cfg.penalty_growth;
      value = objective(wt, gram, c, penalty, nullptr);
    }

    // gradient of the penalized objective through G = V V^T
    Eigen::MatrixXd coeff = -wt;
    double max_violation = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double h = c - gram(i, j);
        if (h > 0.0) {
          coeff(i, j) += 2.0 * penalty * h;
          coeff(j, i) = coeff(i, j);
          max_violation = std::max(max_violation, h);
        }
      }
    }
    Eigen::MatrixXd grad = coeff * v;
    for (int i = 0; i < n; ++i) grad.row(i) -= grad.row(i).dot(v.row(i)) * v.row(i);

    result.grad_norm = grad.norm() / std::sqrt(static_cast<double>(n));
    if (result.grad_norm < cfg.grad_tol && max_violation < 1e-8) {
      result.converged = true;
      break;
    }

    // backtracking ascent step on the sphere product
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      Eigen::MatrixXd cand = v + step * grad;
      normalize_rows(cand);
      Eigen::MatrixXd cand_gram = cand * cand.transpose();
      double relaxed = 0.0;
      const double cand_value = objective(wt, cand_gram, c, penalty, &relaxed);
      if (cand_value > value) {
        v = std::move(cand);
        gram = std::move(cand_gram);
        value = cand_value;
        result.relaxation_value = relaxed;
        step = std::min(step * 1.25, 4.0);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {  // no ascent direction left at this penalty level
      stalled = true;
      break;
    }
  }
  result.iters = iter;
  if (stalled && result.grad_norm < cfg.grad_tol) result.converged = true;

  // Gaussian rounding: r independent directions, each node to its best match
  std::vector<std::vector<int>> assignments(cfg.rounding_trials);
  std::vector<double> costs(cfg.rounding_trials,
                            std::numeric_limits<double>::infinity());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int t = 0; t < cfg.rounding_trials; ++t) {
    Rng rng = root.fork(kRoundStream, static_cast<std::uint64_t>(t));
    Eigen::MatrixXd dirs(r, d);
    for (int k = 0; k < r; ++k)
      for (int q = 0; q < d; ++q) dirs(k, q) = rng.normal();
    Eigen::MatrixXd score = v * dirs.transpose();  // n x r
    std::vector<int> group_of(n, 0);
    for (int i = 0; i < n; ++i) {
      int best = 0;
      for (int k = 1; k < r; ++k)
        if (score(i, k) > score(i, best)) best = k;
      group_of[i] = best;
    }
    fill_empty_groups(ga, group_of, r);
    // Nearest-direction assignment collides clusters whenever the relaxed
    // solution has about as many of them as there are directions, so polish
    // each candidate with the deterministic reassignment rounds before
    // comparing trials.
    local_reassignment(ga, group_of, r);
    fill_empty_groups(ga, group_of, r);

    double g_cost = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (group_of[i] == group_of[j]) g_cost += 2.0 * ga.weight(i, j);
    assignments[t] = std::move(group_of);
    costs[t] = g_cost;
  }

  int best_trial = 0;
  for (int t = 1; t < cfg.rounding_trials; ++t)
    if (costs[t] < costs[best_trial]) best_trial = t;

  SimplePartition p;
  p.groups.assign(r, {});
  for (int i = 0; i < n; ++i) p.groups[assignments[best_trial][i]].push_back(i);
  validate_simple(p, n);
  result.partition = std::move(p);
  result.rounded_cost = costs[best_trial];
  return result;
}

}  // namespace ops
