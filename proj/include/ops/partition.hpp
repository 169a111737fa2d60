#pragma once

#include <cstdint>
#include <vector>

#include "ops/graph.hpp"

namespace ops {

// Disjoint non-empty groups covering 0..n-1, each with a per-group sample
// count r_k >= 1 (r_k <= |V_k| so the partition can always be refined).
struct Partition {
  std::vector<std::vector<int>> groups;
  std::vector<int> subsamples;
  int r() const;  // sum of subsamples
};

// Partition with every r_k = 1.
struct SimplePartition {
  std::vector<std::vector<int>> groups;
  int r() const { return static_cast<int>(groups.size()); }
  Partition to_partition() const;
};

void validate_partition(const Partition& p, int n);
void validate_simple(const SimplePartition& p, int n);

// Objective g: sum over groups of the ordered-pair weight volume (each
// unordered pair counts twice).
double cost(const AssistantGraph& ga, const SimplePartition& p);

// Cost change from adding `node` (currently in no group) to groups[group]:
// 2 * sum of weights from node into the group.
double delta_g(const AssistantGraph& ga, const std::vector<std::vector<int>>& groups,
               int node, int group);

struct GreedyConfig {
  int max_rounds = 100;
};

// Local-search partitioner: visits nodes in a seeded random order, moving
// each to the group with the smallest delta_g (ties to the lowest group
// index), until a full round makes no move or max_rounds is hit. Groups left
// empty are repaired by pulling the highest-removal-gain node out of the
// largest group. Cost never increases between rounds after the first pass.
SimplePartition greedy_partition(const AssistantGraph& ga, int r, std::uint64_t seed,
                                 const GreedyConfig& cfg = {});

// Greedy fill under a dynamic capacity ceil(t/r) after t placements, followed
// by improvement rounds restricted to moves that keep every group size in
// {floor(n/r), ceil(n/r)}. Resulting sizes differ by at most one; when r
// divides n all groups have exactly n/r nodes.
SimplePartition balanced_greedy_partition(const AssistantGraph& ga, int r, std::uint64_t seed,
                                          const GreedyConfig& cfg = {});

// Exhaustive minimum over all partitions of the nodes into exactly r
// non-empty groups (restricted-growth-string enumeration, branch-and-bound on
// the partial cost). Ties resolve to the lexicographically smallest encoding.
// Guarded to n <= 12.
SimplePartition brute_force_optimal(const AssistantGraph& ga, int r);

// Assignment-level repair shared by the partitioners: while any group in
// 0..r-1 is empty, move the node with the largest removal gain out of the
// largest group. Never increases the objective.
void fill_empty_groups(const AssistantGraph& ga, std::vector<int>& group_of, int r);

// Reassignment rounds applied in place to a complete assignment: every pass
// visits nodes in index order and moves each to the group with the smallest
// within-group weight sum (ties to the lowest index), until a full pass makes
// no move or max_rounds is hit. Deterministic; the objective never increases.
void local_reassignment(const AssistantGraph& ga, std::vector<int>& group_of, int r,
                        int max_rounds = 100);

// Splits every group with r_k > 1 into r_k subgroups with greedy_partition on
// the induced sub-assistant-graph (stream fork(seed, k) per group); groups
// with r_k = 1 pass through. The result has partition.r() groups in total.
SimplePartition refine_to_simple(const AssistantGraph& ga, const Partition& partition,
                                 std::uint64_t seed);

}  // namespace ops
