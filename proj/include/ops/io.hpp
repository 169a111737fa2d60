#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ops/graph.hpp"
#include "ops/partition.hpp"
#include "ops/vio.hpp"

namespace ops {

// Shortest round-trip decimal form (std::to_chars); locale-independent, so
// identical values always print identically.
std::string format_double(double v);

// Whole-file helpers: writers buffer everything and only then touch the
// filesystem, so a failed computation never leaves partial output behind.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Graph file: header "n m", then m whitespace-delimited "src dst weight"
// lines. Metadata file: one "node lambda p" line per node.
void save_graph(const SocialGraph& g, const std::string& graph_path,
                const std::string& meta_path);
SocialGraph load_graph(const std::string& graph_path, const std::string& meta_path);

// Latent labels: "node label" lines.
void save_labels(const std::vector<int>& labels, const std::string& path);

// Similarity/correlation CSV: header i,j,value; upper triangle including the
// diagonal. An optional second matrix adds an empirical column.
std::string similarity_csv(const SimilarityMatrix& sim,
                           const SimilarityMatrix* empirical = nullptr);
void save_similarity_csv(const SimilarityMatrix& sim, const std::string& path,
                         const SimilarityMatrix* empirical = nullptr);
SimilarityMatrix load_similarity_csv(const std::string& path);

// Partition file: one line per group, whitespace-separated node ids, with a
// trailing "#r_k=<count>" marker on groups that draw more than one sample.
void save_partition(const Partition& p, const std::string& path);
Partition load_partition(const std::string& path);

// Steady-state draw dump: CSV sample_id,node,opinion,absorber.
std::string sample_dump_csv(const std::vector<SteadyStateSample>& samples);

struct VarianceRow {
  std::string method;
  int r = 0;
  double expected_variance = 0.0;
  std::uint64_t seed = 0;
};

// Variance report: CSV method,r,expected_variance,seed.
std::string variance_report_csv(const std::vector<VarianceRow>& rows);

}  // namespace ops
