#ifndef RESHUFFLE_ANALYSIS_HPP
#define RESHUFFLE_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reshuffle/problem.hpp"
#include "reshuffle/runner.hpp"
#include "reshuffle/shuffle.hpp"

namespace reshuffle {

// Raised when a validator's stepsize/class/method precondition fails; the
// check refuses instead of reporting a vacuous result.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// D_{f_i}(x, y) = f_i(x) - f_i(y) - <grad f_i(y), x - y>
double bregman(const ProblemOracle& problem, int i, const Vector& x,
               const Vector& y);

// Verifies ||grad f(x_star)|| <= 1e-8 (1 + ||x_star||); throws otherwise.
void require_minimizer(const ProblemOracle& problem, const Vector& x_star);

// Limit points of the inner iterates for a fixed permutation:
//   x*^i = x* - gamma * sum_{j<i} grad f_{pi_j}(x*),  i = 1..n-1.
// Convenience accessor treats i = 0 as x* itself.
struct LimitPoints {
  Vector x_star;
  std::vector<Vector> points;  // x*^1 ... x*^{n-1}
  const Vector& at(int i) const { return i == 0 ? x_star : points[i - 1]; }
};
LimitPoints limit_points(const ProblemOracle& problem, const Vector& x_star,
                         double gamma, const Permutation& pi);
// Same, reusing precomputed component gradients at x*.
LimitPoints limit_points_from_gradients(std::span<const Vector> grads_at_star,
                                        const Vector& x_star, double gamma,
                                        const Permutation& pi);

// sigma_*^2 = (1/n) sum_i ||grad f_i(x*)||^2
double sigma_star_sq(const ProblemOracle& problem, const Vector& x_star);

// gamma mu n sigma_*^2 / 8  <=  sigma_Shuffle^2  <=  gamma L n sigma_*^2 / 4
std::pair<double, double> prop1_bounds(double gamma, double mu, double L, int n,
                                       double sigma_star_sq);

struct VarianceReport {
  double sigma_star_sq = 0.0;
  double sigma_shuffle_sq = 0.0;
  double ci_halfwidth = 0.0;    // 0 in exact mode
  long num_permutations = 0;    // 0 in exact mode
  bool exact = false;
  double prop1_lower = 0.0;
  double prop1_upper = 0.0;
  double gamma = 0.0;
};

// Shuffling variance: max over positions i = 1..n-1 of
// E[D_{f_{pi_i}}(x*^i, x*)] / gamma. Exact enumeration when n <= 8 or when
// num_perms == 0; otherwise Monte Carlo over num_perms permutations with a
// 95% normal CI at the maximizing position. n = 1 reports 0.
VarianceReport sigma_shuffle_sq(const ProblemOracle& problem,
                                const Vector& x_star, double gamma,
                                long num_perms = 0, std::uint64_t mc_seed = 1,
                                int threads = 0);
// Serial reference for the Monte Carlo path (identical bits by construction).
VarianceReport sigma_shuffle_sq_serial(const ProblemOracle& problem,
                                       const Vector& x_star, double gamma,
                                       long num_perms, std::uint64_t mc_seed = 1);

// Per-permutation value max_i D_{f_{pi_i}}(x*^i, x*) / gamma, for empirical
// distribution plots.
double sigma_shuffle_sq_of_permutation(const ProblemOracle& problem,
                                       const Vector& x_star, double gamma,
                                       const Permutation& pi);

// Constants (A, B) with (1/n) sum ||grad f_i(x) - grad f(x)||^2
//   <= 2A (f(x) - f*) + B^2.
struct AssumptionConstants {
  double A = 0.0;
  double B_sq = 0.0;
  enum class Provenance { kProp2Analytic, kGridEstimate } provenance =
      Provenance::kProp2Analytic;
};

// Analytic route (requires component infima): A = L,
// B^2 = 2L (f* - mean_i f_i*).
AssumptionConstants assumption2_constants(const ProblemOracle& problem,
                                          double f_star);
// Grid route: smallest B^2 with A = 0 valid on the supplied points
// (max over the grid of the component-gradient variance). Heuristic.
AssumptionConstants assumption2_constants(const ProblemOracle& problem,
                                          std::span<const Vector> grid);

// Exact component-gradient variance at x: (1/n) sum ||grad f_i - grad f||^2.
double gradient_variance(const ProblemOracle& problem, const Vector& x);

// Per-epoch deviations of a recorded epoch:
//   backward V_t  = sum_{i=1..n}   ||x_t^i - x_t||^2
//   forward  V_t  = sum_{i=0..n-1} ||x_t^i - x_{t+1}||^2
struct EpochDeviations {
  double backward = 0.0;
  double forward = 0.0;
};
EpochDeviations epoch_deviations(const Trajectory& traj, int t);

// Pointwise epoch-descent inequality, valid for gamma <= 1/(Ln):
//   f(x_{t+1}) <= f(x_t) - (gamma n / 2) ||grad f(x_t)||^2
//                + (gamma L^2 / 2) V_t.
// Returns the epochs violating it beyond `rel_slack` relative arithmetic
// tolerance. Requires inner iterates at stride 1 and a constant schedule.
struct DescentViolation {
  int epoch;
  double lhs;
  double rhs;
};
std::vector<DescentViolation> epoch_descent_violations(
    const ProblemOracle& problem, const Trajectory& traj, double rel_slack = 1e-9);

// ---------------------------------------------------------------------------
// Theorem-backed stepsizes and bound checks
// ---------------------------------------------------------------------------

enum class TheoremId {
  kThm1,      // RR/SO, each f_i strongly convex
  kThm2,      // RR/SO, f strongly convex
  kThm3,      // RR/SO, convex, average iterate
  kThm4NC,    // RR, nonconvex, min grad norm
  kThm4PL,    // RR, A = 0 + Polyak-Lojasiewicz
  kIgSC,      // IG, each f_i strongly convex
  kIgFSC,     // IG, f strongly convex
  kIgConvex,  // IG, convex, average iterate
  kIgNC,      // IG, nonconvex
  kSgdSC,     // SGD baseline, strongly convex
};

std::string theorem_name(TheoremId id);
std::optional<TheoremId> theorem_from_name(std::string_view name);

struct StepsizeParams {
  double L = 0.0;
  double mu = 0.0;
  int n = 0;
  int T = 0;
  double r0 = 0.0;            // ||x_0 - x*||^2
  double sigma_star = 0.0;    // sigma_*, not squared
  double A = 0.0;
  double B = 0.0;
  double epsilon = 0.0;       // target accuracy for the nonconvex choice
};

struct StepsizeChoice {
  double gamma = 0.0;
  bool fallback = false;  // log argument was <= 1, fell back to 1/L
};

// The corollary stepsizes for the strongly convex, convex and nonconvex
// settings (TheoremId kThm1 / kThm3 / kThm4NC select among them).
StepsizeChoice recommended_stepsize(TheoremId setting,
                                    const StepsizeParams& params);

struct BoundCheck {
  TheoremId theorem_id;
  double rhs = 0.0;
  double observed = 0.0;
  double ci_halfwidth = 0.0;
  double slack = 0.0;
  bool pass = false;  // observed <= rhs (1 + slack) + ci_halfwidth
};

struct CheckOptions {
  std::optional<Vector> x_star;   // computed via solve_reference when absent
  std::optional<double> f_star;
  std::optional<AssumptionConstants> ab;  // for the nonconvex checks
  long num_perms = 0;             // sigma_Shuffle estimation (0 = exact)
  std::uint64_t mc_seed = 1;
  int threads = 0;
};

// Validates one convergence bound against an ensemble of recorded runs at
// constant stepsize gamma. Refuses (PreconditionError) when the stepsize,
// problem class, or method does not match the cited theorem.
BoundCheck check_bound(TheoremId id, const ProblemOracle& problem,
                       std::span<const Trajectory> ensemble, double gamma,
                       double slack = 0.0, const CheckOptions& options = {});

}  // namespace reshuffle

#endif
