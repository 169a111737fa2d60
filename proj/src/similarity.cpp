#include "ops/similarity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>

namespace ops {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// coefficient of neighbor a in node i's stepping term, divided by (lambda_i + lambda_j)
inline double step_scale(const SocialGraph& g, int i) {
  double d = g.weighted_out_degree(i);
  if (d <= 0.0) return 0.0;  // only possible with p_i == 1
  return g.lambda(i) * (1.0 - g.inward(i)) / d;
}

}  // namespace

AbsorptionMatrix compute_Q(const SocialGraph& g, const SolverConfig& cfg) {
  const int n = g.n();
  SquareMatrix x(n, 0.0), next(n, 0.0);
  for (int i = 0; i < n; ++i) x(i, i) = g.inward(i);

  double residual = 0.0;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double update = 0.0;
    double deficit = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : update, deficit)
#endif
    for (int i = 0; i < n; ++i) {
      double* out = next.row(i);
      std::fill(out, out + n, 0.0);
      const double d = g.weighted_out_degree(i);
      if (d > 0.0) {
        const double scale = (1.0 - g.inward(i)) / d;
        for (const Edge& e : g.out_edges(i)) {
          const double c = scale * e.weight;
          const double* src = x.row(e.to);
          for (int j = 0; j < n; ++j) out[j] += c * src[j];
        }
      }
      out[i] += g.inward(i);
      double row_sum = 0.0;
      const double* prev = x.row(i);
      for (int j = 0; j < n; ++j) {
        update = std::max(update, std::fabs(out[j] - prev[j]));
        row_sum += out[j];
      }
      deficit = std::max(deficit, std::fabs(1.0 - row_sum));
    }
    std::swap(x, next);
    residual = update;
    if (update < cfg.tol && deficit < cfg.tol * n) return {std::move(x)};
  }
  throw SolverError("compute_Q did not converge", residual, cfg.max_sweeps);
}

AbsorptionMatrix compute_Q_dense(const SocialGraph& g) {
  const int n = g.n();
  if (n > 500) throw std::invalid_argument("compute_Q_dense: guarded to n <= 500");
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    rhs(i, i) = g.inward(i);
    const double d = g.weighted_out_degree(i);
    if (d <= 0.0) continue;
    const double scale = (1.0 - g.inward(i)) / d;
    for (const Edge& e : g.out_edges(i)) sys(i, e.to) -= scale * e.weight;
  }
  Eigen::MatrixXd q = sys.partialPivLu().solve(rhs);
  SquareMatrix out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = q(i, j);
  return {std::move(out)};
}

std::vector<double> coalescence_bonus(const AbsorptionMatrix& q) {
  const int n = q.n();
  std::vector<double> h(n, 0.0);
  for (int l = 0; l < n; ++l) {
    double s = 0.0;
    const double* row = q.q.row(l);
    for (int k = 0; k < n; ++k) s += row[k] * row[k];
    h[l] = 1.0 - s;
  }
  return h;
}

namespace {

// One pair update of the collapsed recurrence; reads the symmetric matrix m.
inline double pair_value(const SocialGraph& g, const SquareMatrix& m, int i, int j) {
  const double denom = g.lambda(i) + g.lambda(j);
  double acc = 0.0;
  const double ci = step_scale(g, i) / denom;
  if (ci != 0.0) {
    const double* row_j = m.row(j);  // m(a, j) == m(j, a)
    for (const Edge& e : g.out_edges(i)) acc += ci * e.weight * row_j[e.to];
  }
  const double cj = step_scale(g, j) / denom;
  if (cj != 0.0) {
    const double* row_i = m.row(i);
    for (const Edge& e : g.out_edges(j)) acc += cj * e.weight * row_i[e.to];
  }
  return acc;
}

SquareMatrix init_meeting(const SocialGraph& g, const AbsorptionMatrix& q) {
  if (q.n() != g.n()) throw std::invalid_argument("meeting values: Q size mismatch");
  SquareMatrix m(g.n(), 0.0);
  std::vector<double> h = coalescence_bonus(q);
  for (int i = 0; i < g.n(); ++i) m(i, i) = h[i];
  return m;
}

}  // namespace

MeetingValues compute_meeting_values(const SocialGraph& g, const AbsorptionMatrix& q,
                                     const SolverConfig& cfg) {
  const int n = g.n();
  SquareMatrix m = init_meeting(g, q);
  double residual = 0.0;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double update = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double v = pair_value(g, m, i, j);
        update = std::max(update, std::fabs(v - m(i, j)));
        m(i, j) = m(j, i) = v;
      }
    }
    residual = update;
    if (update < cfg.tol) return {std::move(m)};
  }
  throw SolverError("compute_meeting_values did not converge", residual, cfg.max_sweeps);
}

MeetingValues compute_meeting_values_jacobi(const SocialGraph& g, const AbsorptionMatrix& q,
                                            const SolverConfig& cfg) {
  const int n = g.n();
  SquareMatrix m = init_meeting(g, q);
  SquareMatrix next = m;
  double residual = 0.0;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double update = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) reduction(max : update)
#endif
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double v = pair_value(g, m, i, j);
        update = std::max(update, std::fabs(v - m(i, j)));
        next(i, j) = next(j, i) = v;
      }
    }
    std::swap(m, next);
    residual = update;
    if (update < cfg.tol) return {std::move(m)};
  }
  throw SolverError("compute_meeting_values_jacobi did not converge", residual, cfg.max_sweeps);
}

MeetingProbTensor compute_meeting_probs_bruteforce(const SocialGraph& g) {
  const int n = g.n();
  if (n > 12) throw std::invalid_argument("compute_meeting_probs_bruteforce: guarded to n <= 12");

  // unknowns: unordered pairs i < j
  const int np = n * (n - 1) / 2;
  std::vector<std::vector<int>> pid(n, std::vector<int>(n, -1));
  {
    int next_id = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pid[i][j] = pid[j][i] = next_id++;
  }

  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(np, np);
  Eigen::MatrixXd boundary = Eigen::MatrixXd::Zero(np, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int row = pid[i][j];
      const double denom = g.lambda(i) + g.lambda(j);
      const double ci = step_scale(g, i) / denom;
      for (const Edge& e : g.out_edges(i)) {
        const double c = ci * e.weight;
        if (e.to == j) boundary(row, j) += c;  // x_{jj}^l = [j == l]
        else sys(row, pid[e.to][j]) -= c;
      }
      const double cj = step_scale(g, j) / denom;
      for (const Edge& e : g.out_edges(j)) {
        const double c = cj * e.weight;
        if (e.to == i) boundary(row, i) += c;
        else sys(row, pid[i][e.to]) -= c;
      }
    }
  }

  Eigen::MatrixXd sol = sys.partialPivLu().solve(boundary);  // np x n, column l

  MeetingProbTensor t;
  t.n = n;
  t.pr.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      t.pr[(static_cast<std::size_t>(i) * n + i) * n + l] = (i == l) ? 1.0 : 0.0;
      for (int j = i + 1; j < n; ++j) {
        const double v = sol(pid[i][j], l);
        t.pr[(static_cast<std::size_t>(i) * n + j) * n + l] = v;
        t.pr[(static_cast<std::size_t>(j) * n + i) * n + l] = v;
      }
    }
  }
  return t;
}

CorrelationMatrix correlation(const AbsorptionMatrix& q, const MeetingValues& m,
                              double bound_slack) {
  const int n = q.n();
  if (m.n() != n) throw std::invalid_argument("correlation: size mismatch");

  Eigen::Map<const RowMajorMatrix> qm(q.q.data(), n, n);
  RowMajorMatrix co_absorb = qm * qm.transpose();

  SquareMatrix rho(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.5 * (co_absorb(i, j) + co_absorb(j, i)) + m.m(i, j);
      if (i == j) {
        if (std::fabs(v - 1.0) > bound_slack)
          throw std::invalid_argument("correlation: diagonal departs from 1 beyond slack");
        v = 1.0;
      } else {
        if (v < -bound_slack || v > 1.0 + bound_slack)
          throw std::invalid_argument("correlation: entry outside [0,1] beyond slack");
        v = std::min(1.0, std::max(0.0, v));
      }
      rho(i, j) = rho(j, i) = v;
    }
  }
  return {std::move(rho)};
}

SimilarityMatrix similarity(const CorrelationMatrix& rho, double mu0) {
  if (mu0 < 0.0 || mu0 > 1.0)
    throw std::invalid_argument("similarity: mu0 must lie in [0,1]");
  const int n = rho.n();
  const double scale = 2.0 * mu0 * (1.0 - mu0);
  SquareMatrix sigma(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sigma(i, j) = 1.0 - scale * (1.0 - rho.rho(i, j));
  return make_similarity(std::move(sigma));
}

CorrelationMatrix exact_correlation(const SocialGraph& g, const SolverConfig& cfg,
                                    SweepMode mode) {
  AbsorptionMatrix q = compute_Q(g, cfg);
  MeetingValues m = (mode == SweepMode::GaussSeidel)
                        ? compute_meeting_values(g, q, cfg)
                        : compute_meeting_values_jacobi(g, q, cfg);
  return correlation(q, m);
}

SimilarityMatrix exact_similarity(const SocialGraph& g, double mu0, const SolverConfig& cfg,
                                  SweepMode mode) {
  return similarity(exact_correlation(g, cfg, mode), mu0);
}

}  // namespace ops
