#include "ops/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace ops {

double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.n() != b.n()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double m = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  std::size_t total = static_cast<std::size_t>(a.n()) * a.n();
  for (std::size_t i = 0; i < total; ++i) m = std::max(m, std::fabs(pa[i] - pb[i]));
  return m;
}

SocialGraph::SocialGraph(int n, const std::vector<std::tuple<int, int, double>>& edges,
                         std::vector<double> lambda, std::vector<double> inward)
    : n_(n), adj_(n), degree_(n, 0.0), lambda_(std::move(lambda)), inward_(std::move(inward)) {
  if (n <= 0) throw std::invalid_argument("SocialGraph: n must be positive");
  if (static_cast<int>(lambda_.size()) != n || static_cast<int>(inward_.size()) != n)
    throw std::invalid_argument("SocialGraph: lambda/inward size must equal n");
  for (int i = 0; i < n; ++i) {
    if (!(lambda_[i] > 0.0) || !std::isfinite(lambda_[i]))
      throw std::invalid_argument("SocialGraph: lambda must be positive and finite");
    if (!(inward_[i] > 0.0) || inward_[i] > 1.0)
      throw std::invalid_argument("SocialGraph: inward probability must lie in (0,1]");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& [src, dst, w] : edges) {
    if (src < 0 || src >= n || dst < 0 || dst >= n)
      throw std::invalid_argument("SocialGraph: edge endpoint out of range");
    if (src == dst) throw std::invalid_argument("SocialGraph: self-loops are not allowed");
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("SocialGraph: edge weights must be positive and finite");
    if (!seen.insert({src, dst}).second)
      throw std::invalid_argument("SocialGraph: duplicate arc");
    adj_[src].push_back({dst, w});
    degree_[src] += w;
    ++m_;
  }
  for (int i = 0; i < n; ++i) {
    std::sort(adj_[i].begin(), adj_[i].end(),
              [](const Edge& a, const Edge& b) { return a.to < b.to; });
    if (degree_[i] <= 0.0 && inward_[i] != 1.0)
      throw std::invalid_argument(
          "SocialGraph: node with zero out-degree must have inward probability 1");
  }
}

bool SocialGraph::has_edge(int from, int to) const {
  const auto& es = adj_[from];
  auto it = std::lower_bound(es.begin(), es.end(), to,
                             [](const Edge& e, int v) { return e.to < v; });
  return it != es.end() && it->to == to;
}

ValueSpec ValueSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("ValueSpec: expected 'const:V' or 'uniform:LO,HI', got '" + text + "'");
  std::string head = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  try {
    if (head == "const") {
      return constant(std::stod(rest));
    } else if (head == "uniform") {
      auto comma = rest.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("ValueSpec: uniform needs 'LO,HI'");
      double lo = std::stod(rest.substr(0, comma));
      double hi = std::stod(rest.substr(comma + 1));
      if (!(lo <= hi)) throw std::invalid_argument("ValueSpec: uniform needs LO <= HI");
      return uniform_range(lo, hi);
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("ValueSpec: bad number in '" + text + "'");
  }
  throw std::invalid_argument("ValueSpec: unknown kind '" + head + "'");
}

std::string ValueSpec::to_string() const {
  char buf[64];
  if (kind == Kind::Constant) {
    std::snprintf(buf, sizeof buf, "const:%.17g", a);
  } else {
    std::snprintf(buf, sizeof buf, "uniform:%.17g,%.17g", a, b);
  }
  return buf;
}

PlantedGraph generate_planted_partition(const PlantedPartitionConfig& cfg,
                                        const ValueSpec& lambda_spec,
                                        const ValueSpec& inward_spec) {
  if (cfg.n < 2) throw std::invalid_argument("generate_planted_partition: n must be >= 2");
  if (cfg.k < 1 || cfg.k > cfg.n)
    throw std::invalid_argument("generate_planted_partition: k must lie in [1, n]");
  if (cfg.p_high < 0.0 || cfg.p_high > 1.0 || cfg.p_low < 0.0 || cfg.p_low > 1.0)
    throw std::invalid_argument("generate_planted_partition: probabilities must lie in [0,1]");

  const int n = cfg.n, k = cfg.k;
  std::vector<int> labels(n);
  {
    // contiguous blocks; first (n mod k) groups one node larger
    int base = n / k, extra = n % k, node = 0;
    for (int g = 0; g < k; ++g) {
      int size = base + (g < extra ? 1 : 0);
      for (int s = 0; s < size; ++s) labels[node++] = g;
    }
  }

  Rng root(cfg.seed);
  enum : std::uint64_t { kPairStream = 1, kRepairStream = 2, kParamStream = 3 };

  std::vector<std::tuple<int, int, double>> edges;
  std::vector<char> touched(n, 0);
  auto add_undirected = [&](int i, int j) {
    edges.emplace_back(i, j, 1.0);
    edges.emplace_back(j, i, 1.0);
    touched[i] = touched[j] = 1;
  };

  Rng pair_root = root.fork(kPairStream);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double p = (labels[i] == labels[j]) ? cfg.p_high : cfg.p_low;
      Rng pair_rng = pair_root.fork(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
      if (pair_rng.uniform01() < p) add_undirected(i, j);
    }
  }

  // repair isolated nodes so every node has positive out-degree
  for (int i = 0; i < n; ++i) {
    if (touched[i]) continue;
    std::vector<int> candidates;
    for (int j = 0; j < n; ++j)
      if (j != i && labels[j] == labels[i]) candidates.push_back(j);
    if (candidates.empty())
      for (int j = 0; j < n; ++j)
        if (j != i) candidates.push_back(j);
    Rng repair_rng = root.fork(kRepairStream).fork(static_cast<std::uint64_t>(i));
    int j = candidates[repair_rng.uniform_int(candidates.size())];
    add_undirected(i, j);
  }

  Rng param_rng = root.fork(kParamStream);
  std::vector<double> lambda(n), inward(n);
  for (int i = 0; i < n; ++i) lambda[i] = lambda_spec.sample(param_rng);
  for (int i = 0; i < n; ++i) inward[i] = inward_spec.sample(param_rng);

  return {SocialGraph(n, edges, std::move(lambda), std::move(inward)), std::move(labels)};
}

SimilarityMatrix make_similarity(SquareMatrix sigma, double tol) {
  const int n = sigma.n();
  if (n <= 0) throw std::invalid_argument("make_similarity: empty matrix");
  for (int i = 0; i < n; ++i) {
    if (std::fabs(sigma(i, i) - 1.0) > tol)
      throw std::invalid_argument("make_similarity: diagonal must be 1");
    sigma(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      if (std::fabs(sigma(i, j) - sigma(j, i)) > tol)
        throw std::invalid_argument("make_similarity: matrix must be symmetric");
      double v = 0.5 * (sigma(i, j) + sigma(j, i));
      if (v < -tol || v > 1.0 + tol)
        throw std::invalid_argument("make_similarity: entries must lie in [0,1]");
      v = std::min(1.0, std::max(0.0, v));
      sigma(i, j) = sigma(j, i) = v;
    }
  }
  return {std::move(sigma)};
}

AssistantGraph build_assistant_graph(const SimilarityMatrix& sim) {
  const int n = sim.n();
  SquareMatrix w(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = (i == j) ? 0.0 : 1.0 - sim.sigma(i, j);
  return {std::move(w)};
}

}  // namespace ops
