#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "ops/graph.hpp"
#include "ops/io.hpp"

using ops::PlantedPartitionConfig;
using ops::SocialGraph;
using ops::ValueSpec;

namespace {

using EdgeList = std::vector<std::tuple<int, int, double>>;

SocialGraph two_cycle() {
  return SocialGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, {1.0, 1.0}, {0.5, 0.5});
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ops_graph_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("constructor accepts a valid graph and sorts adjacency") {
  SocialGraph g(3, {{0, 2, 0.5}, {0, 1, 2.0}, {1, 0, 1.0}, {2, 0, 1.0}}, {1, 2, 3}, {0.5, 0.5, 1});
  CHECK(g.n() == 3);
  CHECK(g.edge_count() == 4);
  CHECK(g.out_edges(0)[0].to == 1);
  CHECK(g.out_edges(0)[1].to == 2);
  CHECK(g.weighted_out_degree(0) == doctest::Approx(2.5));
  CHECK(g.has_edge(0, 2));
  CHECK(!g.has_edge(2, 1));
  CHECK(g.lambda(1) == 2.0);
  CHECK(g.inward(2) == 1.0);
}

TEST_CASE("constructor rejects malformed graphs") {
  std::vector<double> l2 = {1, 1}, p2 = {0.5, 0.5};
  CHECK_THROWS_AS(SocialGraph(2, {{0, 2, 1.0}, {1, 0, 1.0}}, l2, p2), std::invalid_argument);
  CHECK_THROWS_AS(SocialGraph(2, {{0, 0, 1.0}, {1, 0, 1.0}}, l2, p2), std::invalid_argument);
  CHECK_THROWS_AS(SocialGraph(2, {{0, 1, 0.0}, {1, 0, 1.0}}, l2, p2), std::invalid_argument);
  CHECK_THROWS_AS(SocialGraph(2, {{0, 1, -1.0}, {1, 0, 1.0}}, l2, p2), std::invalid_argument);
  CHECK_THROWS_AS(SocialGraph(2, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 1.0}}, l2, p2),
                  std::invalid_argument);
  CHECK_THROWS_AS(SocialGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, {0.0, 1.0}, p2),
                  std::invalid_argument);
  CHECK_THROWS_AS(SocialGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, l2, {0.0, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SocialGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, l2, {1.1, 0.5}),
                  std::invalid_argument);
  // node 1 has no out-edges and p < 1
  CHECK_THROWS_AS(SocialGraph(2, {{0, 1, 1.0}}, l2, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("a node without out-edges is allowed when it always resets") {
  SocialGraph g(2, {{0, 1, 1.0}}, {1, 1}, {0.5, 1.0});
  CHECK(g.weighted_out_degree(1) == 0.0);
  SocialGraph single(1, {}, {2.0}, {1.0});
  CHECK(single.n() == 1);
}

TEST_CASE("ValueSpec parses, samples in range, and round-trips") {
  ValueSpec c = ValueSpec::parse("const:2.5");
  CHECK(c.kind == ValueSpec::Kind::Constant);
  ops::Rng rng(1);
  CHECK(c.sample(rng) == 2.5);
  CHECK(ValueSpec::parse(c.to_string()).a == 2.5);

  ValueSpec u = ValueSpec::parse("uniform:0,0.01");
  for (int i = 0; i < 1000; ++i) {
    double v = u.sample(rng);
    REQUIRE(v > 0.0);  // (lo, hi]: an inward spec with lo = 0 stays valid
    REQUIRE(v <= 0.01);
  }
  CHECK(ValueSpec::parse(u.to_string()).b == 0.01);

  CHECK_THROWS_AS(ValueSpec::parse("weird:1"), std::invalid_argument);
  CHECK_THROWS_AS(ValueSpec::parse("uniform:3"), std::invalid_argument);
  CHECK_THROWS_AS(ValueSpec::parse("const:abc"), std::invalid_argument);
}

TEST_CASE("planted generator is deterministic and well-formed") {
  PlantedPartitionConfig cfg;
  cfg.n = 23;
  cfg.k = 4;
  cfg.p_low = 0.05;
  cfg.seed = 99;
  auto spec_l = ValueSpec::constant(1.0);
  auto spec_p = ValueSpec::uniform_range(0.0, 0.01);
  auto a = ops::generate_planted_partition(cfg, spec_l, spec_p);
  auto b = ops::generate_planted_partition(cfg, spec_l, spec_p);

  CHECK(a.graph.n() == 23);
  CHECK(a.graph.edge_count() == b.graph.edge_count());
  for (int i = 0; i < a.graph.n(); ++i) {
    CHECK(a.labels[i] == b.labels[i]);
    REQUIRE(a.graph.out_edges(i).size() == b.graph.out_edges(i).size());
    CHECK(a.graph.lambda(i) == b.graph.lambda(i));
    CHECK(a.graph.inward(i) == b.graph.inward(i));
    CHECK(a.graph.inward(i) > 0.0);
    CHECK(a.graph.weighted_out_degree(i) > 0.0);  // isolated nodes repaired
    for (std::size_t e = 0; e < a.graph.out_edges(i).size(); ++e) {
      CHECK(a.graph.out_edges(i)[e].to == b.graph.out_edges(i)[e].to);
      // every arc is half of an undirected unit edge
      CHECK(a.graph.out_edges(i)[e].weight == 1.0);
      CHECK(a.graph.has_edge(a.graph.out_edges(i)[e].to, i));
    }
  }

  // 23 nodes in 4 groups: the first 23 mod 4 = 3 blocks get 6 nodes, last gets 5
  std::vector<int> sizes(4, 0);
  for (int lab : a.labels) ++sizes[lab];
  CHECK(sizes == std::vector<int>{6, 6, 6, 5});
  CHECK(a.labels.front() == 0);
  CHECK(a.labels.back() == 3);
}

TEST_CASE("degenerate probabilities give two disjoint cliques") {
  PlantedPartitionConfig cfg;
  cfg.n = 4;
  cfg.k = 2;
  cfg.p_high = 1.0;
  cfg.p_low = 0.0;
  auto pg = ops::generate_planted_partition(cfg, ValueSpec::constant(1.0),
                                            ValueSpec::constant(0.5));
  CHECK(pg.graph.edge_count() == 4);  // two undirected edges = four arcs
  CHECK(pg.graph.has_edge(0, 1));
  CHECK(pg.graph.has_edge(2, 3));
  CHECK(!pg.graph.has_edge(0, 2));
  CHECK(!pg.graph.has_edge(1, 3));
}

TEST_CASE("planted edge frequencies match p_high and p_low") {
  // k = 2 equal groups of 6: 2 * C(6,2) = 30 within-pairs, 36 cross-pairs. With
  // p_high = 0.7, p_low = 0.2 the expected counts over 400 seeds are binomial;
  // use 4-sigma bands on the totals.
  PlantedPartitionConfig cfg;
  cfg.n = 12;
  cfg.k = 2;
  cfg.p_high = 0.7;
  cfg.p_low = 0.2;
  const int seeds = 400;
  long within = 0, cross = 0;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = 1000 + s;
    auto pg = ops::generate_planted_partition(cfg, ValueSpec::constant(1.0),
                                              ValueSpec::constant(0.5));
    for (int i = 0; i < cfg.n; ++i)
      for (const auto& e : pg.graph.out_edges(i)) {
        if (e.to < i) continue;  // count undirected edges once
        (pg.labels[i] == pg.labels[e.to] ? within : cross) += 1;
      }
  }
  // repair adds a handful of extra edges at most; the band absorbs it
  const double ew = 30.0 * cfg.p_high, sw = std::sqrt(30.0 * cfg.p_high * (1 - cfg.p_high));
  const double ec = 36.0 * cfg.p_low, sc = std::sqrt(36.0 * cfg.p_low * (1 - cfg.p_low));
  CHECK(std::abs(within / double(seeds) - ew) < 4.0 * sw / std::sqrt(double(seeds)) + 0.05);
  CHECK(std::abs(cross / double(seeds) - ec) < 4.0 * sc / std::sqrt(double(seeds)) + 0.05);
}

TEST_CASE("isolated nodes are repaired inside their latent group") {
  PlantedPartitionConfig cfg;
  cfg.n = 10;
  cfg.k = 2;
  cfg.p_high = 0.0;  // nobody gets sampled edges; all ten need repair
  cfg.p_low = 0.0;
  auto pg = ops::generate_planted_partition(cfg, ValueSpec::constant(1.0),
                                            ValueSpec::constant(0.5));
  for (int i = 0; i < cfg.n; ++i) {
    REQUIRE(pg.graph.weighted_out_degree(i) > 0.0);
    for (const auto& e : pg.graph.out_edges(i)) CHECK(pg.labels[e.to] == pg.labels[i]);
  }
}

TEST_CASE("graph and metadata files round-trip exactly") {
  SocialGraph g(3, {{0, 1, 0.125}, {1, 2, 2.5}, {2, 0, 1.0}, {0, 2, 0.7000000000000001}},
                {1.0, 2.25, 0.5}, {0.3, 1.0, 0.9});
  auto dir = temp_dir();
  auto gp = (dir / "g.txt").string(), mp = (dir / "m.txt").string();
  ops::save_graph(g, gp, mp);
  SocialGraph r = ops::load_graph(gp, mp);
  CHECK(r.n() == g.n());
  CHECK(r.edge_count() == g.edge_count());
  for (int i = 0; i < g.n(); ++i) {
    CHECK(r.lambda(i) == g.lambda(i));
    CHECK(r.inward(i) == g.inward(i));
    REQUIRE(r.out_edges(i).size() == g.out_edges(i).size());
    for (std::size_t e = 0; e < g.out_edges(i).size(); ++e) {
      CHECK(r.out_edges(i)[e].to == g.out_edges(i)[e].to);
      CHECK(r.out_edges(i)[e].weight == g.out_edges(i)[e].weight);
    }
  }
}

TEST_CASE("malformed graph files are rejected") {
  auto dir = temp_dir();
  auto gp = (dir / "bad.txt").string(), mp = (dir / "badm.txt").string();
  ops::write_file(mp, "0 1 0.5\n1 1 0.5\n");
  ops::write_file(gp, "2 2\n0 1 1\n");  // header promises two edges
  CHECK_THROWS_AS(ops::load_graph(gp, mp), std::runtime_error);
  ops::write_file(gp, "2 1\n0 x 1\n");
  CHECK_THROWS_AS(ops::load_graph(gp, mp), std::runtime_error);
  ops::write_file(gp, "nonsense\n");
  CHECK_THROWS_AS(ops::load_graph(gp, mp), std::runtime_error);
  ops::write_file(gp, "2 2\n0 1 1\n1 0 1\n");
  ops::write_file(mp, "0 1 0.5\n");  // missing node 1 metadata
  CHECK_THROWS_AS(ops::load_graph(gp, mp), std::runtime_error);
}

TEST_CASE("make_similarity validates and the assistant graph mirrors it") {
  ops::SquareMatrix s(2);
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;
  s(0, 1) = 0.25;
  s(1, 0) = 0.25;
  auto sim = ops::make_similarity(s);
  auto ga = ops::build_assistant_graph(sim);
  CHECK(ga.weight(0, 1) == doctest::Approx(0.75));
  CHECK(ga.weight(0, 0) == 0.0);

  s(0, 1) = 0.5;  // breaks symmetry
  CHECK_THROWS_AS(ops::make_similarity(s), std::invalid_argument);
  s(0, 1) = 0.25;
  s(0, 0) = 0.9;  // breaks the unit diagonal
  CHECK_THROWS_AS(ops::make_similarity(s), std::invalid_argument);
  s(0, 0) = 1.0;
  s(0, 1) = s(1, 0) = 1.5;  // out of range
  CHECK_THROWS_AS(ops::make_similarity(s), std::invalid_argument);
}
