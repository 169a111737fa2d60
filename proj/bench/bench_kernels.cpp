// Timing comparison between the serial reference solvers and the OpenMP
// kernels on a planted-partition instance. Not a test: it prints a table and
// the cross-implementation agreement so regressions in either speed or
// accuracy are visible at a glance.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "ops/graph.hpp"
#include "ops/matrix.hpp"
#include "ops/similarity.hpp"
#include "ops/vio.hpp"

namespace {

double time_best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

void set_threads(int t) {
#ifdef _OPENMP
  omp_set_num_threads(t);
#else
  (void)t;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  int n = 200;
  int k = 20;
  int samples = 20000;
  int repeats = 3;
  std::uint64_t seed = 99;

  CLI::App app{"kernel timing: serial reference vs OpenMP implementations"};
  app.add_option("--n", n, "nodes in the planted graph");
  app.add_option("--k", k, "latent groups");
  app.add_option("--samples", samples, "steady-state draws for the sampler benchmark");
  app.add_option("--repeats", repeats, "timing repeats (best kept)");
  app.add_option("--seed", seed, "graph seed");
  CLI11_PARSE(app, argc, argv);

  ops::PlantedPartitionConfig pc;
  pc.n = n;
  pc.k = k;
  pc.p_high = 0.9;
  pc.p_low = 0.02;
  pc.seed = seed;
  ops::PlantedGraph pg = ops::generate_planted_partition(
      pc, ops::ValueSpec::constant(1.0), ops::ValueSpec::uniform_range(0.05, 0.25));
  const ops::SocialGraph& g = pg.graph;

  int hw = 1;
#ifdef _OPENMP
  hw = omp_get_max_threads();
#endif
  std::vector<int> thread_counts = {1};
  for (int t = 2; t <= hw; t *= 2) thread_counts.push_back(t);
  if (thread_counts.back() != hw) thread_counts.push_back(hw);

  std::printf("planted graph: n=%d k=%d arcs=%d, hardware threads=%d\n", g.n(), k,
              g.edge_count(), hw);
  std::printf("%-34s %10s %9s\n", "kernel", "best[s]", "speedup");

  ops::SolverConfig cfg;
  cfg.tol = 1e-9;

  // absorption matrix (parallel sweeps)
  double q_base = 0.0;
  ops::AbsorptionMatrix q = ops::compute_Q(g, cfg);
  for (int t : thread_counts) {
    set_threads(t);
    double dt = time_best_of(repeats, [&] { q = ops::compute_Q(g, cfg); });
    if (t == 1) q_base = dt;
    std::printf("%-34s %10.4f %8.2fx\n",
                ("absorption solve, " + std::to_string(t) + " thread(s)").c_str(), dt,
                q_base / dt);
  }

  // meeting values: serial Gauss-Seidel reference vs parallel Jacobi
  set_threads(1);
  ops::MeetingValues gs;
  double gs_time = time_best_of(repeats, [&] { gs = ops::compute_meeting_values(g, q, cfg); });
  std::printf("%-34s %10.4f %8s\n", "meeting values, serial reference", gs_time, "-");

  ops::MeetingValues jc;
  double jc_base = 0.0;
  for (int t : thread_counts) {
    set_threads(t);
    double dt =
        time_best_of(repeats, [&] { jc = ops::compute_meeting_values_jacobi(g, q, cfg); });
    if (t == 1) jc_base = dt;
    std::printf("%-34s %10.4f %8.2fx\n",
                ("meeting values, jacobi " + std::to_string(t) + " thread(s)").c_str(), dt,
                jc_base / dt);
  }
  std::printf("%-34s %10.3e\n", "max |GS - jacobi|", ops::max_abs_diff(gs.m, jc.m));

  // steady-state sampler (parallel over draws)
  ops::SimilarityMatrix emp;
  double s_base = 0.0;
  for (int t : thread_counts) {
    set_threads(t);
    double dt = time_best_of(
        repeats, [&] { emp = ops::empirical_similarity(g, {0.5}, samples, seed + 1); });
    if (t == 1) s_base = dt;
    std::printf("%-34s %10.4f %8.2fx\n",
                ("sampler, " + std::to_string(samples) + " draws, " + std::to_string(t) +
                 " thread(s)")
                    .c_str(),
                dt, s_base / dt);
  }

  ops::SimilarityMatrix exact = ops::similarity(ops::correlation(q, gs), 0.5);
  std::printf("%-34s %10.3e\n", "max |empirical - exact|", ops::max_abs_diff(emp.sigma, exact.sigma));
  return 0;
}
