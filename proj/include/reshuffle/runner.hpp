#ifndef RESHUFFLE_RUNNER_HPP
#define RESHUFFLE_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "reshuffle/problem.hpp"
#include "reshuffle/shuffle.hpp"

namespace reshuffle {

// ---------------------------------------------------------------------------
// Stepsize schedules. The capped-inverse schedule keeps 1/L for the first k0
// steps and then decays as c / (mu * (k - k0)):
//   gamma_k = min{ 1/L, c / (mu * max{1, k - k0}) }.
// c = 3 is the usual choice for RR/SO/IG, c = 2 for SGD.
// ---------------------------------------------------------------------------

struct StepSchedule {
  enum class Kind { kConstant, kCappedInverse };
  Kind kind = Kind::kConstant;
  double gamma = 0.0;                      // constant
  double L = 0.0, mu = 0.0, c = 3.0;       // capped-inverse
  long k0 = 0;

  static StepSchedule constant(double gamma);
  static StepSchedule capped_inverse(double L, double mu, long k0,
                                     double c = 3.0);
  bool is_constant() const { return kind == Kind::kConstant; }
};

double step_size(const StepSchedule& schedule, long k);

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct PointMetrics {
  double f_value = 0.0;
  double grad_norm_sq = 0.0;
  std::optional<double> dist_sq;  // ||x - x*||^2 when x* is known
  std::optional<double> delta;    // f(x) - f*   when f* is known
};

struct Reference {
  std::optional<Vector> x_star;
  std::optional<double> f_star;
};

struct DivergencePoint {
  int epoch = -1;
  int step = -1;  // inner step index within the epoch, 0-based
};

struct Trajectory {
  Method method = Method::kRR;
  std::uint64_t seed = 0;
  StepSchedule schedule;

  std::vector<Vector> epoch_iterates;        // x_0 ... x_T
  std::vector<PointMetrics> epoch_metrics;   // parallel to epoch_iterates
  // inner_iterates[t] holds the recorded post-step iterates of epoch t
  // (x_t^s, x_t^{2s}, ..., x_t^n at stride s = inner_stride).
  std::vector<std::vector<Vector>> inner_iterates;
  std::vector<std::vector<int>> realized_orderings;  // one per epoch
  int inner_stride = 1;
  std::optional<DivergencePoint> diverged;

  int epochs() const { return static_cast<int>(epoch_iterates.size()) - 1; }
  double gamma_at(long global_step) const {
    return step_size(schedule, global_step);
  }
};

struct RunConfig {
  OrderingScheme scheme;
  StepSchedule schedule;
  int epochs = 1;
  std::uint64_t seed = 0;
  Vector x0;
  bool record_inner = false;
  int record_every = 1;     // inner-iterate stride (1 = every step)
  bool store_iterates = true;  // false keeps only x_0/x_T plus metrics
  Reference reference;
};

struct DivergenceError : std::runtime_error {
  DivergenceError(int step)
      : std::runtime_error("non-finite iterate at inner step " +
                           std::to_string(step)),
        step(step) {}
  int step;
};

// Applies the |ordering| sequential component steps
//   x <- x - gamma_k grad f_{ordering[j]}(x),   k = k_start + j,
// returning the epoch's final iterate. `record`, when set, receives every
// post-step iterate (j, x). Throws DivergenceError on a non-finite iterate.
Vector run_epoch(const ProblemOracle& problem, Vector x,
                 std::span<const int> ordering, const StepSchedule& schedule,
                 long k_start,
                 const std::function<void(int, const Vector&)>* record = nullptr);

// Runs T epochs of the configured method. Deterministic given (seed, config,
// problem). A divergence stops the run early and sets trajectory.diverged.
Trajectory run(const RunConfig& config, const ProblemOracle& problem);

// Seed ensembles. Results are indexed by seed order, so the OpenMP version
// and the serial reference agree bit-for-bit.
std::vector<Trajectory> run_ensemble(const RunConfig& base,
                                     const ProblemOracle& problem,
                                     std::span<const std::uint64_t> seeds,
                                     int threads = 0);
std::vector<Trajectory> run_ensemble_serial(
    const RunConfig& base, const ProblemOracle& problem,
    std::span<const std::uint64_t> seeds);

// ---------------------------------------------------------------------------
// High-precision reference solve (plain Nesterov, no restarts). Quadratics
// return their closed-form minimizer directly. For nonconvex problems the
// returned point is only stationary and is flagged as such.
// ---------------------------------------------------------------------------

struct ReferenceSolution {
  Vector x;
  double grad_norm = 0.0;
  long gradient_evals = 0;
  bool nonconvex_flagged = false;
};

ReferenceSolution solve_reference(const ProblemOracle& problem,
                                  std::optional<double> tol = {},
                                  std::optional<Vector> x0 = {});

}  // namespace reshuffle

#endif
