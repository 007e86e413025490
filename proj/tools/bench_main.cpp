// Compares the OpenMP kernels against their serial reference implementations:
// seed ensembles, permutation Monte Carlo, and exact permutation enumeration.
// Results must agree bit-for-bit; timings show the parallel speedup.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "reshuffle/analysis.hpp"
#include "reshuffle/experiment.hpp"

using namespace reshuffle;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

ProblemPtr bench_problem() {
  SplitMix64 rng(7);
  QuadraticSpec spec;
  for (int i = 0; i < 8; ++i) {
    Vector c(4);
    for (int k = 0; k < 4; ++k) c[k] = 6.0 * rng.next_unit() - 3.0;
    spec.centers.push_back(c);
    spec.curvatures.push_back(1.0);
  }
  return make_quadratic(spec);
}

template <typename F>
double timed(const char* label, F&& f) {
  const auto t0 = Clock::now();
  f();
  const auto t1 = Clock::now();
  const double s = seconds(t0, t1);
  std::printf("  %-28s %8.3f s\n", label, s);
  return s;
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("benchmark: serial reference vs OpenMP (%d thread%s)\n", threads,
              threads == 1 ? "" : "s");

  const ProblemPtr p = bench_problem();
  const Vector x_star = *p->closed_form_minimizer();

  // 1. Seed ensembles of RR runs.
  RunConfig rc;
  rc.scheme = OrderingScheme::rr();
  rc.schedule = StepSchedule::constant(0.1);
  rc.epochs = 50;
  rc.x0 = Vector::Constant(4, 2.0);
  std::vector<std::uint64_t> seeds(4000);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;

  std::printf("ensemble of %zu RR runs, T=%d:\n", seeds.size(), rc.epochs);
  std::vector<Trajectory> serial, parallel;
  const double ts = timed("serial reference", [&] {
    serial = run_ensemble_serial(rc, *p, seeds);
  });
  const double tp = timed("openmp", [&] {
    parallel = run_ensemble(rc, *p, seeds, threads);
  });
  bool equal = serial.size() == parallel.size();
  for (std::size_t i = 0; equal && i < serial.size(); ++i)
    equal = serial[i].epoch_iterates.back() == parallel[i].epoch_iterates.back();
  std::printf("  identical results: %s, speedup %.2fx\n",
              equal ? "yes" : "NO", ts / tp);

  // 2. Monte Carlo shuffling-variance estimate.
  std::printf("sigma_Shuffle Monte Carlo, 200000 permutations:\n");
  VarianceReport rs, rp;
  const double ms = timed("serial reference", [&] {
    rs = sigma_shuffle_sq_serial(*p, x_star, 0.05, 200000, 99);
  });
  const double mp = timed("openmp", [&] {
    rp = sigma_shuffle_sq(*p, x_star, 0.05, 200000, 99, threads);
  });
  std::printf("  identical results: %s, speedup %.2fx\n",
              rs.sigma_shuffle_sq == rp.sigma_shuffle_sq ? "yes" : "NO",
              ms / mp);

  // 3. Exact enumeration over 8! permutations.
  std::printf("exact enumeration, n=8:\n");
  double es = 0.0, ep = 0.0;
  auto fn = [&](const Permutation& pi) {
    return sigma_shuffle_sq_of_permutation(*p, x_star, 0.05, pi);
  };
  const double e1 = timed("serial reference", [&] {
    es = enumerate_permutation_expectation_serial(8, fn);
  });
  const double e2 = timed("openmp", [&] {
    ep = enumerate_permutation_expectation(8, fn, threads);
  });
  std::printf("  identical results: %s, speedup %.2fx\n",
              es == ep ? "yes" : "NO", e1 / e2);

  return equal && rs.sigma_shuffle_sq == rp.sigma_shuffle_sq && es == ep ? 0
                                                                          : 1;
}
