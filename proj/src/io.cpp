#include "ops/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ops {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& why) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + why);
}

// splits a text into non-empty lines, tolerating trailing newline
std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

void save_graph(const SocialGraph& g, const std::string& graph_path,
                const std::string& meta_path) {
  std::string out;
  out += std::to_string(g.n()) + " " + std::to_string(g.edge_count()) + "\n";
  for (int i = 0; i < g.n(); ++i)
    for (const Edge& e : g.out_edges(i))
      out += std::to_string(i) + " " + std::to_string(e.to) + " " + format_double(e.weight) + "\n";
  write_file(graph_path, out);

  std::string meta;
  for (int i = 0; i < g.n(); ++i)
    meta += std::to_string(i) + " " + format_double(g.lambda(i)) + " " +
            format_double(g.inward(i)) + "\n";
  write_file(meta_path, meta);
}

SocialGraph load_graph(const std::string& graph_path, const std::string& meta_path) {
  const auto graph_lines = lines_of(read_file(graph_path));
  if (graph_lines.empty()) parse_fail(graph_path, 1, "empty graph file");

  int n = 0, m = 0;
  {
    std::istringstream head(graph_lines[0]);
    if (!(head >> n >> m)) parse_fail(graph_path, 1, "expected header 'n m'");
  }
  if (n <= 0 || m < 0) parse_fail(graph_path, 1, "invalid header counts");
  if (static_cast<int>(graph_lines.size()) != m + 1)
    parse_fail(graph_path, static_cast<int>(graph_lines.size()),
               "edge count does not match header");

  std::vector<std::tuple<int, int, double>> edges;
  edges.reserve(m);
  for (int l = 1; l <= m; ++l) {
    std::istringstream row(graph_lines[l]);
    int src, dst;
    double w;
    if (!(row >> src >> dst >> w)) parse_fail(graph_path, l + 1, "expected 'src dst weight'");
    std::string extra;
    if (row >> extra) parse_fail(graph_path, l + 1, "trailing tokens");
    edges.emplace_back(src, dst, w);
  }

  const auto meta_lines = lines_of(read_file(meta_path));
  if (static_cast<int>(meta_lines.size()) != n)
    parse_fail(meta_path, static_cast<int>(meta_lines.size()),
               "expected one metadata line per node");
  std::vector<double> lambda(n, 0.0), inward(n, 0.0);
  std::vector<char> seen(n, 0);
  for (std::size_t l = 0; l < meta_lines.size(); ++l) {
    std::istringstream row(meta_lines[l]);
    int node;
    double lam, p;
    if (!(row >> node >> lam >> p))
      parse_fail(meta_path, static_cast<int>(l) + 1, "expected 'node lambda p'");
    if (node < 0 || node >= n) parse_fail(meta_path, static_cast<int>(l) + 1, "node out of range");
    if (seen[node]) parse_fail(meta_path, static_cast<int>(l) + 1, "duplicate node");
    seen[node] = 1;
    lambda[node] = lam;
    inward[node] = p;
  }

  try {
    return SocialGraph(n, edges, std::move(lambda), std::move(inward));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(graph_path + ": " + e.what());
  }
}

void save_labels(const std::vector<int>& labels, const std::string& path) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    out += std::to_string(i) + " " + std::to_string(labels[i]) + "\n";
  write_file(path, out);
}

std::string similarity_csv(const SimilarityMatrix& sim, const SimilarityMatrix* empirical) {
  if (empirical && empirical->n() != sim.n())
    throw std::invalid_argument("similarity_csv: empirical matrix size mismatch");
  std::string out = empirical ? "i,j,value,empirical\n" : "i,j,value\n";
  const int n = sim.n();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      out += std::to_string(i) + "," + std::to_string(j) + "," + format_double(sim.sigma(i, j));
      if (empirical) out += "," + format_double(empirical->sigma(i, j));
      out += "\n";
    }
  }
  return out;
}

void save_similarity_csv(const SimilarityMatrix& sim, const std::string& path,
                         const SimilarityMatrix* empirical) {
  write_file(path, similarity_csv(sim, empirical));
}

SimilarityMatrix load_similarity_csv(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty() || lines[0].rfind("i,j,value", 0) != 0)
    parse_fail(path, 1, "expected header starting with 'i,j,value'");

  struct Entry {
    int i, j;
    double v;
  };
  std::vector<Entry> entries;
  int n = 0;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    std::string cells = lines[l];
    for (char& c : cells)
      if (c == ',') c = ' ';
    std::istringstream row(cells);
    Entry e{};
    if (!(row >> e.i >> e.j >> e.v)) parse_fail(path, static_cast<int>(l) + 1, "expected i,j,value");
    if (e.i < 0 || e.j < e.i) parse_fail(path, static_cast<int>(l) + 1, "need 0 <= i <= j");
    n = std::max(n, e.j + 1);
    entries.push_back(e);
  }
  if (n == 0) parse_fail(path, 1, "no entries");

  SquareMatrix sigma(n, 0.0);
  std::vector<char> filled(static_cast<std::size_t>(n) * n, 0);
  for (const Entry& e : entries) {
    auto& flag = filled[static_cast<std::size_t>(e.i) * n + e.j];
    if (flag) parse_fail(path, 1, "duplicate pair in similarity file");
    flag = 1;
    sigma(e.i, e.j) = sigma(e.j, e.i) = e.v;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (!filled[static_cast<std::size_t>(i) * n + j])
        parse_fail(path, 1, "missing pair (" + std::to_string(i) + "," + std::to_string(j) + ")");

  try {
    return make_similarity(std::move(sigma));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_partition(const Partition& p, const std::string& path) {
  std::string out;
  for (std::size_t k = 0; k < p.groups.size(); ++k) {
    for (std::size_t a = 0; a < p.groups[k].size(); ++a) {
      if (a) out += " ";
      out += std::to_string(p.groups[k][a]);
    }
    if (p.subsamples[k] != 1) out += " #r_k=" + std::to_string(p.subsamples[k]);
    out += "\n";
  }
  write_file(path, out);
}

Partition load_partition(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  Partition p;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    std::string body = lines[l];
    int rk = 1;
    const auto hash = body.find('#');
    if (hash != std::string::npos) {
      std::string suffix = body.substr(hash + 1);
      body = body.substr(0, hash);
      if (suffix.rfind("r_k=", 0) != 0)
        parse_fail(path, static_cast<int>(l) + 1, "expected '#r_k=<count>' suffix");
      try {
        rk = std::stoi(suffix.substr(4));
      } catch (const std::exception&) {
        parse_fail(path, static_cast<int>(l) + 1, "bad r_k value");
      }
    }
    std::istringstream row(body);
    std::vector<int> group;
    int v;
    while (row >> v) group.push_back(v);
    if (group.empty()) parse_fail(path, static_cast<int>(l) + 1, "empty group line");
    p.groups.push_back(std::move(group));
    p.subsamples.push_back(rk);
  }
  if (p.groups.empty()) parse_fail(path, 1, "no groups");
  return p;
}

std::string sample_dump_csv(const std::vector<SteadyStateSample>& samples) {
  std::string out = "sample_id,node,opinion,absorber\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& f = samples[s].opinions.values;
    const auto& a = samples[s].trace.absorber;
    for (std::size_t i = 0; i < f.size(); ++i)
      out += std::to_string(s) + "," + std::to_string(i) + "," + std::to_string(int(f[i])) + "," +
             std::to_string(a[i]) + "\n";
  }
  return out;
}

std::string variance_report_csv(const std::vector<VarianceRow>& rows) {
  std::string out = "method,r,expected_variance,seed\n";
  for (const auto& row : rows)
    out += row.method + "," + std::to_string(row.r) + "," + format_double(row.expected_variance) +
           "," + std::to_string(row.seed) + "\n";
  return out;
}

}  // namespace ops
