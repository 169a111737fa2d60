#include "ops/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ops/rng.hpp"

namespace ops {

int Partition::r() const {
  int total = 0;
  for (int rk : subsamples) total += rk;
  return total;
}

Partition SimplePartition::to_partition() const {
  return {groups, std::vector<int>(groups.size(), 1)};
}

namespace {

void validate_groups(const std::vector<std::vector<int>>& groups, int n) {
  if (groups.empty()) throw std::invalid_argument("partition: no groups");
  std::vector<int> seen(n, 0);
  for (const auto& group : groups) {
    if (group.empty()) throw std::invalid_argument("partition: empty group");
    for (int v : group) {
      if (v < 0 || v >= n) throw std::invalid_argument("partition: node id out of range");
      if (seen[v]++) throw std::invalid_argument("partition: node appears twice");
    }
  }
  for (int i = 0; i < n; ++i)
    if (!seen[i]) throw std::invalid_argument("partition: node missing from all groups");
}

}  // namespace

void validate_partition(const Partition& p, int n) {
  validate_groups(p.groups, n);
  if (p.subsamples.size() != p.groups.size())
    throw std::invalid_argument("partition: subsample count must match group count");
  for (std::size_t k = 0; k < p.groups.size(); ++k) {
    if (p.subsamples[k] < 1) throw std::invalid_argument("partition: r_k must be >= 1");
    if (p.subsamples[k] > static_cast<int>(p.groups[k].size()))
      throw std::invalid_argument("partition: r_k must not exceed the group size");
  }
  if (p.r() > n) throw std::invalid_argument("partition: total samples exceed n");
}

void validate_simple(const SimplePartition& p, int n) { validate_groups(p.groups, n); }

double cost(const AssistantGraph& ga, const SimplePartition& p) {
  validate_simple(p, ga.n());
  double g = 0.0;
  for (const auto& group : p.groups) {
    const int size = static_cast<int>(group.size());
    for (int a = 0; a < size; ++a)
      for (int b = a + 1; b < size; ++b) g += 2.0 * ga.weight(group[a], group[b]);
  }
  return g;
}

double delta_g(const AssistantGraph& ga, const std::vector<std::vector<int>>& groups,
               int node, int group) {
  if (group < 0 || group >= static_cast<int>(groups.size()))
    throw std::invalid_argument("delta_g: group index out of range");
  double s = 0.0;
  for (int j : groups[group])
    if (j != node) s += ga.weight(node, j);
  return 2.0 * s;
}

namespace {

struct Assignment {
  std::vector<int> group_of;           // -1 while unplaced
  std::vector<int> size;               // nodes per group
  std::vector<std::vector<int>> order;  // node visit order reused per round
};

// weight sums from `node` into every group under the current assignment
void group_sums(const SquareMatrix& w, const std::vector<int>& group_of, int node, int r,
                std::vector<double>& s) {
  s.assign(r, 0.0);
  const double* row = w.row(node);
  const int n = w.n();
  for (int j = 0; j < n; ++j) {
    const int gj = group_of[j];
    if (gj >= 0 && j != node) s[gj] += row[j];
  }
}

SimplePartition collect(const std::vector<int>& group_of, int r) {
  SimplePartition p;
  p.groups.assign(r, {});
  for (int v = 0; v < static_cast<int>(group_of.size()); ++v)
    p.groups[group_of[v]].push_back(v);
  return p;
}

void check_r(int r, int n, const char* who) {
  if (r < 1 || r > n) throw std::invalid_argument(std::string(who) + ": need 1 <= r <= n");
}

}  // namespace

void fill_empty_groups(const AssistantGraph& ga, std::vector<int>& group_of, int r) {
  const int n = ga.n();
  std::vector<int> size(r, 0);
  for (int v = 0; v < n; ++v) {
    if (group_of[v] < 0 || group_of[v] >= r)
      throw std::invalid_argument("fill_empty_groups: assignment out of range");
    ++size[group_of[v]];
  }
  for (int empty = 0; empty < r; ++empty) {
    if (size[empty] > 0) continue;
    // moving a node into an empty group removes its within-group weight and
    // adds nothing, so the objective never increases
    int donor = 0;
    for (int l = 1; l < r; ++l)
      if (size[l] > size[donor]) donor = l;
    int pick = -1;
    double best_gain = -1.0;
    for (int v = 0; v < n; ++v) {
      if (group_of[v] != donor) continue;
      double gain = 0.0;
      const double* row = ga.weight.row(v);
      for (int j = 0; j < n; ++j)
        if (j != v && group_of[j] == donor) gain += row[j];
      gain *= 2.0;
      if (gain > best_gain) {
        best_gain = gain;
        pick = v;
      }
    }
    --size[donor];
    group_of[pick] = empty;
    ++size[empty];
  }
}

void local_reassignment(const AssistantGraph& ga, std::vector<int>& group_of, int r,
                        int max_rounds) {
  const int n = ga.n();
  check_r(r, n, "local_reassignment");
  if (static_cast<int>(group_of.size()) != n)
    throw std::invalid_argument("local_reassignment: assignment size mismatch");
  std::vector<double> s;
  for (int round = 0; round < max_rounds; ++round) {
    bool moved = false;
    for (int node = 0; node < n; ++node) {
      group_sums(ga.weight, group_of, node, r, s);
      int best = 0;
      for (int l = 1; l < r; ++l)
        if (s[l] < s[best]) best = l;
      if (group_of[node] != best) {
        group_of[node] = best;
        moved = true;
      }
    }
    if (!moved) break;
  }
}

SimplePartition greedy_partition(const AssistantGraph& ga, int r, std::uint64_t seed,
                                 const GreedyConfig& cfg) {
  const int n = ga.n();
  check_r(r, n, "greedy_partition");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<int> group_of(n, -1), size(r, 0);
  std::vector<double> s;
  for (int round = 0; round < cfg.max_rounds; ++round) {
    bool moved = false;
    for (int node : order) {
      group_sums(ga.weight, group_of, node, r, s);
      int best = 0;
      for (int l = 1; l < r; ++l)
        if (s[l] < s[best]) best = l;
      const int old = group_of[node];
      if (old != best) {
        if (old >= 0) --size[old];
        group_of[node] = best;
        ++size[best];
        moved = true;
      }
    }
    if (!moved) break;
  }

  fill_empty_groups(ga, group_of, r);

  SimplePartition p = collect(group_of, r);
  validate_simple(p, n);
  return p;
}

SimplePartition balanced_greedy_partition(const AssistantGraph& ga, int r, std::uint64_t seed,
                                          const GreedyConfig& cfg) {
  const int n = ga.n();
  check_r(r, n, "balanced_greedy_partition");
  const int floor_sz = n / r;
  const int ceil_sz = (n + r - 1) / r;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<int> group_of(n, -1), size(r, 0);
  std::vector<double> s;

  // fill pass under the running capacity ceil(t/r), which keeps every prefix
  // balanced to within one node
  int placed = 0;
  for (int node : order) {
    ++placed;
    const int cap = (placed + r - 1) / r;
    group_sums(ga.weight, group_of, node, r, s);
    int best = -1;
    for (int l = 0; l < r; ++l) {
      if (size[l] >= cap) continue;
      if (best < 0 || s[l] < s[best]) best = l;
    }
    group_of[node] = best;
    ++size[best];
  }

  if (floor_sz != ceil_sz) {
    for (int round = 0; round < cfg.max_rounds; ++round) {
      bool moved = false;
      for (int node : order) {
        const int old = group_of[node];
        group_sums(ga.weight, group_of, node, r, s);
        int best = old;
        for (int l = 0; l < r; ++l) {
          if (l != old && (size[l] >= ceil_sz || size[old] <= floor_sz)) continue;
          if (s[l] < s[best]) best = l;
        }
        if (best != old) {
          --size[old];
          group_of[node] = best;
          ++size[best];
          moved = true;
        }
      }
      if (!moved) break;
    }
  }

  SimplePartition p = collect(group_of, r);
  validate_simple(p, n);
  for (const auto& group : p.groups) {
    const int sz = static_cast<int>(group.size());
    if (sz < floor_sz || sz > ceil_sz)
      throw std::logic_error("balanced_greedy_partition: sizes drifted out of balance");
  }
  return p;
}

namespace {

struct BruteState {
  const SquareMatrix* w = nullptr;
  int n = 0, r = 0;
  std::vector<int> code, best_code;
  double best_cost = std::numeric_limits<double>::infinity();

  void search(int i, int blocks, double acc) {
    if (acc >= best_cost) return;  // weights are non-negative
    if (i == n) {
      if (blocks == r) {
        best_cost = acc;
        best_code = code;
      }
      return;
    }
    if (blocks + (n - i) < r) return;  // cannot still open enough blocks
    const int limit = std::min(blocks, r - 1);
    const double* row = w->row(i);
    for (int b = 0; b <= limit; ++b) {
      double added = 0.0;
      for (int j = 0; j < i; ++j)
        if (code[j] == b) added += row[j];
      code[i] = b;
      search(i + 1, std::max(blocks, b + 1), acc + 2.0 * added);
    }
    code[i] = -1;
  }
};

}  // namespace

SimplePartition brute_force_optimal(const AssistantGraph& ga, int r) {
  const int n = ga.n();
  check_r(r, n, "brute_force_optimal");
  if (n > 12) throw std::invalid_argument("brute_force_optimal: guarded to n <= 12");

  BruteState st;
  st.w = &ga.weight;
  st.n = n;
  st.r = r;
  st.code.assign(n, -1);
  st.search(0, 0, 0.0);

  SimplePartition p = collect(st.best_code, r);
  validate_simple(p, n);
  return p;
}

SimplePartition refine_to_simple(const AssistantGraph& ga, const Partition& partition,
                                 std::uint64_t seed) {
  const int n = ga.n();
  validate_partition(partition, n);
  Rng root(seed);

  SimplePartition out;
  for (std::size_t k = 0; k < partition.groups.size(); ++k) {
    const auto& group = partition.groups[k];
    const int rk = partition.subsamples[k];
    if (rk == 1) {
      out.groups.push_back(group);
      continue;
    }
    const int nk = static_cast<int>(group.size());
    SquareMatrix sub(nk, 0.0);
    for (int a = 0; a < nk; ++a)
      for (int b = 0; b < nk; ++b) sub(a, b) = ga.weight(group[a], group[b]);
    SimplePartition split = greedy_partition({std::move(sub)}, rk, root.fork(k).key());
    for (const auto& sub_group : split.groups) {
      std::vector<int> mapped;
      mapped.reserve(sub_group.size());
      for (int local : sub_group) mapped.push_back(group[local]);
      out.groups.push_back(std::move(mapped));
    }
  }
  validate_simple(out, n);
  return out;
}

}  // namespace ops
