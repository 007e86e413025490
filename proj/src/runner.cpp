#include "reshuffle/runner.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reshuffle {

StepSchedule StepSchedule::constant(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("need gamma >= 0");
  StepSchedule s;
  s.kind = Kind::kConstant;
  s.gamma = gamma;
  return s;
}

StepSchedule StepSchedule::capped_inverse(double L, double mu, long k0,
                                          double c) {
  if (!(L > 0.0) || !(mu > 0.0) || !(c > 0.0) || k0 < 0)
    throw std::invalid_argument("capped-inverse needs L, mu, c > 0 and k0 >= 0");
  StepSchedule s;
  s.kind = Kind::kCappedInverse;
  s.L = L;
  s.mu = mu;
  s.k0 = k0;
  s.c = c;
  return s;
}

double step_size(const StepSchedule& schedule, long k) {
  if (k < 0) throw std::invalid_argument("need step index k >= 0");
  if (schedule.kind == StepSchedule::Kind::kConstant) return schedule.gamma;
  const double denom = schedule.mu * std::max<long>(1, k - schedule.k0);
  return std::min(1.0 / schedule.L, schedule.c / denom);
}

Vector run_epoch(const ProblemOracle& problem, Vector x,
                 std::span<const int> ordering, const StepSchedule& schedule,
                 long k_start,
                 const std::function<void(int, const Vector&)>* record) {
  for (std::size_t j = 0; j < ordering.size(); ++j) {
    const double gamma = step_size(schedule, k_start + static_cast<long>(j));
    x -= gamma * problem.component_gradient(ordering[j], x);
    if (!x.allFinite()) throw DivergenceError(static_cast<int>(j));
    if (record) (*record)(static_cast<int>(j), x);
  }
  return x;
}

namespace {

PointMetrics boundary_metrics(const ProblemOracle& problem, const Vector& x,
                              const Reference& ref) {
  PointMetrics m;
  m.f_value = problem.value(x);
  m.grad_norm_sq = problem.gradient(x).squaredNorm();
  if (ref.x_star) m.dist_sq = (x - *ref.x_star).squaredNorm();
  if (ref.f_star) m.delta = m.f_value - *ref.f_star;
  return m;
}

}  // namespace

Trajectory run(const RunConfig& config, const ProblemOracle& problem) {
  if (config.epochs < 1) throw std::invalid_argument("need epochs >= 1");
  if (config.record_every < 1)
    throw std::invalid_argument("need record_every >= 1");
  const int n = problem.num_components();

  Trajectory traj;
  traj.method = config.scheme.kind;
  traj.seed = config.seed;
  traj.schedule = config.schedule;
  traj.inner_stride = config.record_every;

  Vector x = config.x0;
  if (x.size() == 0) x = Vector::Zero(problem.dim());
  traj.epoch_iterates.push_back(x);
  traj.epoch_metrics.push_back(boundary_metrics(problem, x, config.reference));

  for (int t = 0; t < config.epochs; ++t) {
    auto ordering = epoch_ordering(config.scheme, n, t, config.seed);
    std::vector<Vector> inner;
    std::function<void(int, const Vector&)> recorder;
    if (config.record_inner) {
      inner.reserve(n / config.record_every + 1);
      recorder = [&](int j, const Vector& xi) {
        if ((j + 1) % config.record_every == 0 || j + 1 == n)
          inner.push_back(xi);
      };
    }
    try {
      x = run_epoch(problem, std::move(x), ordering, config.schedule,
                    static_cast<long>(t) * n,
                    config.record_inner ? &recorder : nullptr);
    } catch (const DivergenceError& err) {
      traj.diverged = DivergencePoint{t, err.step};
      traj.realized_orderings.push_back(std::move(ordering));
      return traj;
    }
    traj.realized_orderings.push_back(std::move(ordering));
    if (config.record_inner) traj.inner_iterates.push_back(std::move(inner));
    traj.epoch_metrics.push_back(
        boundary_metrics(problem, x, config.reference));
    if (config.store_iterates || t + 1 == config.epochs)
      traj.epoch_iterates.push_back(x);
  }
  return traj;
}

std::vector<Trajectory> run_ensemble(const RunConfig& base,
                                     const ProblemOracle& problem,
                                     std::span<const std::uint64_t> seeds,
                                     int threads) {
  std::vector<Trajectory> out(seeds.size());
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
#endif
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    RunConfig cfg = base;
    cfg.seed = seeds[s];
    out[s] = run(cfg, problem);
  }
  return out;
}

std::vector<Trajectory> run_ensemble_serial(
    const RunConfig& base, const ProblemOracle& problem,
    std::span<const std::uint64_t> seeds) {
  return run_ensemble(base, problem, seeds, 1);
}

ReferenceSolution solve_reference(const ProblemOracle& problem,
                                  std::optional<double> tol,
                                  std::optional<Vector> x0) {
  constexpr long kMaxGradientEvals = 1000000;
  ReferenceSolution sol;
  if (auto closed = problem.closed_form_minimizer()) {
    sol.x = *closed;
    sol.grad_norm = problem.gradient(sol.x).norm();
    sol.gradient_evals = 1;
    return sol;
  }

  const ProblemConstants& c = problem.constants();
  const bool convex = convexity_at_least(c.convexity, ConvexityClass::kConvex);
  Vector x = x0 ? *x0 : Vector::Zero(problem.dim());
  Vector g = problem.gradient(x);
  long evals = 1;
  const double eps = tol ? *tol : 1e-12 * (1.0 + g.norm());
  const double L = c.L;
  if (!(L > 0.0)) throw std::invalid_argument("reference solve needs L > 0");

  // Nesterov momentum: strongly convex coefficient when mu > 0, otherwise the
  // t_k sequence. Restarting is intentionally off.
  const double sc_beta =
      c.mu > 0.0 ? (std::sqrt(L) - std::sqrt(c.mu)) / (std::sqrt(L) + std::sqrt(c.mu))
                 : 0.0;
  Vector y = x;
  Vector x_prev = x;
  double tk = 1.0;
  while (g.norm() > eps) {
    if (evals >= kMaxGradientEvals)
      throw std::runtime_error(
          "solve_reference: gradient evaluation cap exceeded before tolerance");
    const Vector gy = problem.gradient(y);
    ++evals;
    x_prev = x;
    x = y - (1.0 / L) * gy;
    double beta;
    if (c.mu > 0.0) {
      beta = sc_beta;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      beta = (tk - 1.0) / t_next;
      tk = t_next;
    }
    y = x + beta * (x - x_prev);
    g = problem.gradient(x);
    ++evals;
  }
  sol.x = x;
  sol.grad_norm = g.norm();
  sol.gradient_evals = evals;
  sol.nonconvex_flagged = !convex;
  return sol;
}

}  // namespace reshuffle
