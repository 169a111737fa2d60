#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "ops/matrix.hpp"
#include "ops/rng.hpp"

namespace ops {

struct Edge {
  int to;
  double weight;
};

// Weighted directed graph over n agents, with a Poisson update rate lambda_i
// and an inward (innate-reset) probability p_i per node. Immutable after
// construction; the constructor enforces:
//   - edge endpoints in range, no self-loops, weights > 0, no duplicate arcs
//   - lambda_i > 0, p_i in (0,1]
//   - weighted out-degree d_i > 0 unless p_i == 1 (a node that always resets
//     never consults a neighbor, which admits e.g. the single-node graph)
class SocialGraph {
 public:
  SocialGraph(int n, const std::vector<std::tuple<int, int, double>>& edges,
              std::vector<double> lambda, std::vector<double> inward);

  int n() const { return n_; }
  int edge_count() const { return m_; }

  const std::vector<Edge>& out_edges(int i) const { return adj_[i]; }
  double weighted_out_degree(int i) const { return degree_[i]; }
  double lambda(int i) const { return lambda_[i]; }
  double inward(int i) const { return inward_[i]; }

  bool has_edge(int from, int to) const;

  const std::vector<double>& lambdas() const { return lambda_; }
  const std::vector<double>& inwards() const { return inward_; }

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<Edge>> adj_;
  std::vector<double> degree_;
  std::vector<double> lambda_;
  std::vector<double> inward_;
};

// Per-node parameter generator: a constant, or uniform draws from (lo, hi]
// (right-closed so an inward spec with lo = 0 still yields p_i > 0).
struct ValueSpec {
  enum class Kind { Constant, Uniform };
  Kind kind = Kind::Constant;
  double a = 1.0;
  double b = 1.0;

  static ValueSpec constant(double v) { return {Kind::Constant, v, v}; }
  static ValueSpec uniform_range(double lo, double hi) { return {Kind::Uniform, lo, hi}; }

  // Accepts "const:V" or "uniform:LO,HI".
  static ValueSpec parse(const std::string& text);
  std::string to_string() const;

  double sample(Rng& rng) const {
    if (kind == Kind::Constant) return a;
    return b - (b - a) * rng.uniform01();
  }
};

struct PlantedPartitionConfig {
  int n = 100;
  int k = 20;
  double p_high = 0.9;
  double p_low = 0.01;
  std::uint64_t seed = 1;
};

struct PlantedGraph {
  SocialGraph graph;
  std::vector<int> labels;  // latent group per node
};

// Stochastic block graph with k contiguous near-equal groups (first n mod k
// groups get one extra node). Each unordered pair becomes an undirected unit
// edge (two opposite arcs) with probability p_high inside a group and p_low
// across groups, each pair drawn from its own derived RNG stream. Nodes left
// without edges get one undirected unit edge to a random node of their latent
// group (any other node if the group is a singleton). Node parameters are
// drawn from the given specs. Deterministic given cfg.seed.
PlantedGraph generate_planted_partition(const PlantedPartitionConfig& cfg,
                                        const ValueSpec& lambda_spec,
                                        const ValueSpec& inward_spec);

// Symmetric matrix of pairwise steady-state agreement probabilities,
// unit diagonal, entries in [0,1].
struct SimilarityMatrix {
  SquareMatrix sigma;
  int n() const { return sigma.n(); }
};

// Throws std::invalid_argument if sigma is not a valid similarity matrix;
// tol bounds the allowed symmetry/range/diagonal slack.
SimilarityMatrix make_similarity(SquareMatrix sigma, double tol = 1e-9);

// Complete weighted graph with w_ij = 1 - sigma_ij (zero diagonal); the
// partition objective sums these weights inside groups.
struct AssistantGraph {
  SquareMatrix weight;
  int n() const { return weight.n(); }
};

AssistantGraph build_assistant_graph(const SimilarityMatrix& sim);

}  // namespace ops
