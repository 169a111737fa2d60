#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ops/graph.hpp"
#include "ops/matrix.hpp"

namespace ops {

struct SolverConfig {
  double tol = 1e-10;    // max-norm update threshold per sweep
  int max_sweeps = 10000;
};

// Raised when a fixed-point solve fails to reach tol within max_sweeps; the
// residual (max-norm update of the final sweep) is attached.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int sweeps)
      : std::runtime_error(what + " (residual " + std::to_string(residual) +
                           " after " + std::to_string(sweeps) + " sweeps)"),
        residual_(residual),
        sweeps_(sweeps) {}
  double residual() const { return residual_; }
  int sweeps() const { return sweeps_; }

 private:
  double residual_;
  int sweeps_;
};

// Q(i,k) = probability that the backward walk started at i is absorbed by the
// innate reset of node k. Rows sum to 1; Q(i,i) >= p_i; entries in [0,1].
struct AbsorptionMatrix {
  SquareMatrix q;
  int n() const { return q.n(); }
};

// Fixed-point iteration X <- P + (I-P) D^-1 A X from X = P. Converges for
// p_i > 0 (row sums of the update operator are 1 - p_i < 1); stops once the
// max-norm update is below cfg.tol and every row-sum deficit is below
// n * cfg.tol, otherwise throws SolverError.
AbsorptionMatrix compute_Q(const SocialGraph& g, const SolverConfig& cfg = {});

// Direct dense solve of (I - (I-P) D^-1 A) Q = P; guarded to n <= 500.
AbsorptionMatrix compute_Q_dense(const SocialGraph& g);

// h_l = 1 - sum_k Q(l,k)^2: the gain in co-absorption probability obtained by
// two walkers coalescing at l instead of walking on independently.
std::vector<double> coalescence_bonus(const AbsorptionMatrix& q);

// M(i,j) = sum_l Pr[first meeting of walkers from i and j happens at l] * h_l,
// with boundary M(i,i) = h_i. Symmetric; entries in [0,1].
struct MeetingValues {
  SquareMatrix m;
  int n() const { return m.n(); }
};

// Collapsed one-matrix recurrence solved by Gauss-Seidel sweeps over ordered
// node pairs (i < j, lexicographic, in place). Reference implementation: the
// sweep order is part of the contract and results are bit-reproducible.
MeetingValues compute_meeting_values(const SocialGraph& g, const AbsorptionMatrix& q,
                                     const SolverConfig& cfg = {});

// Jacobi variant of the same fixed point: all pairs updated from the previous
// sweep's values, which makes the sweep embarrassingly parallel (OpenMP).
// Converges to the same fixed point as the Gauss-Seidel reference.
MeetingValues compute_meeting_values_jacobi(const SocialGraph& g, const AbsorptionMatrix& q,
                                            const SolverConfig& cfg = {});

// Dense first-meeting-place probabilities Pr[walkers from (i,j) first meet at
// l], obtained by solving the full linear system per meeting place; cubic in
// the pair count and guarded to n <= 12. Test oracle for the collapsed solver.
struct MeetingProbTensor {
  int n = 0;
  std::vector<double> pr;  // indexed i*n*n + j*n + l
  double operator()(int i, int j, int l) const {
    return pr[(static_cast<std::size_t>(i) * n + j) * n + l];
  }
};

MeetingProbTensor compute_meeting_probs_bruteforce(const SocialGraph& g);

// rho(i,j) = sum_k Q(i,k) Q(j,k) + M(i,j): steady-state probability that i and
// j expose the same opinion regardless of the innate distribution. Unit
// diagonal. Entries outside [0,1] by more than bound_slack are an error;
// smaller excursions are clamped.
struct CorrelationMatrix {
  SquareMatrix rho;
  int n() const { return rho.n(); }
};

CorrelationMatrix correlation(const AbsorptionMatrix& q, const MeetingValues& m,
                              double bound_slack = 1e-6);

// sigma(i,j) = 1 - 2 mu0 (1 - mu0) (1 - rho(i,j)) for innate opinions that are
// i.i.d. Bernoulli(mu0).
SimilarityMatrix similarity(const CorrelationMatrix& rho, double mu0);

enum class SweepMode { GaussSeidel, Jacobi };

// Full pipeline: absorption matrix, meeting values, correlation, similarity.
SimilarityMatrix exact_similarity(const SocialGraph& g, double mu0,
                                  const SolverConfig& cfg = {},
                                  SweepMode mode = SweepMode::GaussSeidel);

CorrelationMatrix exact_correlation(const SocialGraph& g, const SolverConfig& cfg = {},
                                    SweepMode mode = SweepMode::GaussSeidel);

}  // namespace ops
