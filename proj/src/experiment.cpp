#include "reshuffle/experiment.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "reshuffle/gzipio.hpp"

namespace reshuffle {

namespace {

constexpr std::uint64_t kProtocolSalt = 0x50524f54;

std::vector<int> base_sample_order(const ExperimentConfig& cfg, int N) {
  if (cfg.base_ordering == "file") {
    std::vector<int> id(N);
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  if (cfg.base_ordering.rfind("shuffle:", 0) == 0) {
    const auto seed =
        static_cast<std::uint64_t>(std::stoll(cfg.base_ordering.substr(8)));
    return sample_permutation(seed, N);
  }
  throw ConfigError("base_ordering must be 'file' or 'shuffle:<seed>'");
}

std::vector<Vector> random_centers(int N, int dim, std::uint64_t seed,
                                   double scale) {
  // Box-Muller over the deterministic stream.
  SplitMix64 rng(derive_stream(seed, 0x43454e54));
  std::vector<Vector> centers(N);
  for (int i = 0; i < N; ++i) {
    Vector v(dim);
    for (int k = 0; k < dim; ++k) {
      const double u1 = std::max(rng.next_unit(), 1e-300);
      const double u2 = rng.next_unit();
      v[k] = scale * std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * M_PI * u2);
    }
    centers[i] = v;
  }
  return centers;
}

}  // namespace

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  BuiltProblem bp;
  switch (cfg.problem) {
    case ExperimentConfig::ProblemKind::kQuadratic:
    case ExperimentConfig::ProblemKind::kQuadraticRandom: {
      QuadraticSpec spec;
      if (cfg.problem == ExperimentConfig::ProblemKind::kQuadratic) {
        if (cfg.centers.empty())
          throw ConfigError("quadratic problem needs 'centers'");
        spec.centers = cfg.centers;
        spec.curvatures = cfg.curvatures.empty()
                              ? std::vector<double>(cfg.centers.size(), 1.0)
                              : cfg.curvatures;
      } else {
        if (cfg.random_N < 1)
          throw ConfigError("quadratic-random needs N >= 1");
        spec.centers = random_centers(cfg.random_N, cfg.random_dim,
                                      cfg.problem_seed, cfg.center_scale);
        spec.curvatures.assign(cfg.random_N, 1.0);
      }
      bp.N = static_cast<int>(spec.centers.size());
      bp.samples = make_quadratic(spec);
      bp.regroup = [spec](const MinibatchPartition& part) {
        return make_quadratic(spec, part.groups);
      };
      bp.oracle = cfg.tau > 0
                      ? bp.regroup(group_minibatches(
                            bp.N, cfg.tau,
                            base_sample_order(cfg, bp.N)))
                      : bp.samples;
      break;
    }
    case ExperimentConfig::ProblemKind::kCosine: {
      if (cfg.centers.empty()) throw ConfigError("cosine problem needs 'centers'");
      bp.oracle = make_cosine_quadratic(cfg.centers);
      bp.N = static_cast<int>(cfg.centers.size());
      break;
    }
    case ExperimentConfig::ProblemKind::kLibsvm: {
      if (cfg.libsvm_path.empty()) throw ConfigError("libsvm problem needs 'libsvm_path'");
      const Dataset ds = parse_libsvm(read_text_file(cfg.libsvm_path),
                                      cfg.dim_override);
      if (ds.N() == 0) throw ConfigError("dataset is empty: " + cfg.libsvm_path);
      LogisticSpec spec;
      spec.features = ds.features;
      spec.labels = ds.labels;
      if (cfg.lambda) {
        spec.lambda = *cfg.lambda;
      } else {
        // lambda = L / sqrt(N) with L the unregularized max row smoothness.
        const double L0 = logistic_smoothness(ds.features, 0.0).L_max;
        spec.lambda = default_regularizer(L0, ds.N());
      }
      bp.N = ds.N();
      bp.samples = make_logistic(spec);
      bp.regroup = [spec](const MinibatchPartition& part) {
        return make_logistic(spec, part.groups);
      };
      bp.oracle = cfg.tau > 0
                      ? bp.regroup(group_minibatches(
                            bp.N, cfg.tau,
                            base_sample_order(cfg, bp.N)))
                      : bp.samples;
      break;
    }
  }
  if (convexity_at_least(bp.oracle->constants().convexity,
                         ConvexityClass::kConvex)) {
    const ReferenceSolution sol = solve_reference(*bp.oracle);
    bp.ref.x_star = sol.x;
    bp.ref.f_star = bp.oracle->value(sol.x);
  }
  return bp;
}

namespace {

StepSchedule schedule_for(const ExperimentConfig& cfg, Method m,
                          const ProblemOracle& p) {
  if (cfg.constant_schedule) return StepSchedule::constant(cfg.gamma);
  const ProblemConstants& c = p.constants();
  if (!(c.mu > 0.0))
    throw ConfigError("capped-inverse schedule needs a strongly convex problem");
  const long K = static_cast<long>(p.num_components()) * cfg.epochs;
  const long k0 = cfg.k0 ? *cfg.k0 : K / 40;
  const double num =
      (m == Method::kSgdIid || m == Method::kSgdWindow) ? cfg.c_sgd : cfg.c_rr;
  return StepSchedule::capped_inverse(c.L, c.mu, k0, num);
}

Vector starting_point(const ExperimentConfig& cfg, int d) {
  if (cfg.x0.empty()) return Vector::Zero(d);
  if (static_cast<int>(cfg.x0.size()) != d)
    throw ConfigError("x0 dimension does not match the problem");
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = cfg.x0[i];
  return x;
}

Vector minibatch_gradient(const ProblemOracle& samples,
                          std::span<const int> idx, const Vector& x) {
  Vector g = Vector::Zero(x.size());
  for (int i : idx) g += samples.component_gradient(i, x);
  return g / static_cast<double>(idx.size());
}

PointMetrics protocol_metrics(const ProblemOracle& oracle, const Vector& x,
                              const Reference& ref) {
  PointMetrics m;
  m.f_value = oracle.value(x);
  m.grad_norm_sq = oracle.gradient(x).squaredNorm();
  if (ref.x_star) m.dist_sq = (x - *ref.x_star).squaredNorm();
  if (ref.f_star) m.delta = m.f_value - *ref.f_star;
  return m;
}

}  // namespace

Trajectory run_protocol(Method method, const BuiltProblem& bp, int tau,
                        const StepSchedule& schedule, int epochs,
                        std::uint64_t seed, bool record_inner,
                        int record_every, const Vector& x0) {
  if (!bp.samples || !bp.regroup)
    throw std::invalid_argument("protocol runs need a sample-level problem");
  const int N = bp.N;
  const int n = (N + tau - 1) / tau;
  // Fixed identity grouping for metrics, shared across all methods.
  const ProblemPtr metrics_oracle = bp.regroup(group_minibatches(N, tau));

  Trajectory traj;
  traj.method = method;
  traj.seed = seed;
  traj.schedule = schedule;
  traj.inner_stride = record_every;

  Vector x = x0.size() > 0 ? x0 : Vector::Zero(bp.samples->dim());
  if (x.size() != bp.samples->dim())
    throw std::invalid_argument("x0 dimension does not match the problem");
  traj.epoch_iterates.push_back(x);
  traj.epoch_metrics.push_back(protocol_metrics(*metrics_oracle, x, bp.ref));

  std::optional<MinibatchPartition> fixed;
  if (method == Method::kSO)
    fixed = group_minibatches(
        N, tau, sample_permutation(derive_stream(seed, 0, kProtocolSalt), N));
  else if (method == Method::kIG)
    fixed = group_minibatches(N, tau);

  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);

  for (int t = 0; t < epochs; ++t) {
    std::vector<Vector> inner;
    std::function<void(int, const Vector&)> recorder =
        [&](int j, const Vector& xi) {
          if ((j + 1) % record_every == 0 || j + 1 == n) inner.push_back(xi);
        };
    try {
      if (method == Method::kRR || method == Method::kSO ||
          method == Method::kIG) {
        ProblemPtr epoch_oracle;
        if (method == Method::kRR) {
          const auto part = group_minibatches(
              N, tau,
              sample_permutation(derive_stream(seed, t + 1, kProtocolSalt), N));
          epoch_oracle = bp.regroup(part);
        } else {
          epoch_oracle = bp.regroup(*fixed);
        }
        x = run_epoch(*epoch_oracle, std::move(x), identity, schedule,
                      static_cast<long>(t) * n,
                      record_inner ? &recorder : nullptr);
      } else {
        // Sample-level SGD minibatching: tau iid draws per step, or one start
        // index and a consecutive window.
        SplitMix64 rng(derive_stream(seed, t + 1, kProtocolSalt ^ 0x53));
        std::vector<int> batch(tau);
        for (int j = 0; j < n; ++j) {
          if (method == Method::kSgdIid) {
            for (int& b : batch) b = static_cast<int>(rng.next_below(N));
          } else {
            const auto start = static_cast<int>(rng.next_below(N));
            for (int k = 0; k < tau; ++k) batch[k] = (start + k) % N;
          }
          const double gamma =
              step_size(schedule, static_cast<long>(t) * n + j);
          x -= gamma * minibatch_gradient(*bp.samples, batch, x);
          if (!x.allFinite()) throw DivergenceError(j);
          if (record_inner) recorder(j, x);
        }
      }
    } catch (const DivergenceError& err) {
      traj.diverged = DivergencePoint{t, err.step};
      return traj;
    }
    if (record_inner) traj.inner_iterates.push_back(std::move(inner));
    traj.epoch_metrics.push_back(protocol_metrics(*metrics_oracle, x, bp.ref));
    traj.epoch_iterates.push_back(x);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Mode drivers
// ---------------------------------------------------------------------------

const char* const kSweepHeader =
    "tau,gamma,n_components,sigma_star_sq,sigma_shuffle_sq,ci_halfwidth,"
    "num_permutations,exact,prop1_lower,prop1_upper";

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    out << r.tau << ',' << format_double(r.gamma) << ',' << r.n_components
        << ',' << format_double(r.sigma_star_sq) << ','
        << format_double(r.sigma_shuffle_sq) << ','
        << format_double(r.ci_halfwidth) << ',' << r.num_permutations << ','
        << (r.exact ? "1" : "0") << ',' << format_double(r.prop1_lower) << ','
        << format_double(r.prop1_upper) << '\n';
  }
}

const char* const kCheckHeader =
    "theorem,method,gamma,epochs,seeds,observed,rhs,ci_halfwidth,slack,pass,"
    "note";

void write_check_csv(std::ostream& out, std::span<const CheckRow> rows) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  out << kCheckHeader << '\n';
  for (const CheckRow& r : rows) {
    out << r.theorem << ',' << r.method << ',' << format_double(r.gamma) << ','
        << r.epochs << ',' << r.seeds << ',' << opt(r.observed) << ','
        << opt(r.rhs) << ',' << opt(r.ci_halfwidth) << ','
        << format_double(r.slack) << ',' << (r.pass ? "1" : "0") << ','
        << r.note << '\n';
  }
}

namespace {

bool uses_protocol(const ExperimentConfig& cfg) {
  return cfg.tau > 0 &&
         (cfg.problem == ExperimentConfig::ProblemKind::kLibsvm ||
          cfg.problem == ExperimentConfig::ProblemKind::kQuadraticRandom);
}

std::vector<Trajectory> run_cells(const ExperimentConfig& cfg,
                                  const BuiltProblem& bp, Method method,
                                  bool store_iterates) {
  const StepSchedule schedule = schedule_for(cfg, method, *bp.oracle);
  std::vector<Trajectory> out(cfg.seeds.size());
  const bool protocol = uses_protocol(cfg);
  int threads = cfg.threads;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
#endif
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    if (protocol) {
      out[s] = run_protocol(method, bp, cfg.tau, schedule, cfg.epochs,
                            cfg.seeds[s], cfg.record_inner, cfg.record_every,
                            starting_point(cfg, bp.samples->dim()));
    } else {
      RunConfig rc;
      rc.scheme.kind = method;
      if (method == Method::kSgdWindow)
        rc.scheme.window_tau =
            cfg.sgd_window > 0 ? cfg.sgd_window : bp.oracle->num_components();
      rc.schedule = schedule;
      rc.epochs = cfg.epochs;
      rc.seed = cfg.seeds[s];
      rc.x0 = starting_point(cfg, bp.oracle->dim());
      rc.record_inner = cfg.record_inner;
      rc.record_every = cfg.record_every;
      rc.store_iterates = store_iterates;
      rc.reference = bp.ref;
      out[s] = run(rc, *bp.oracle);
    }
  }
  return out;
}

ExperimentResult do_trajectories(const ExperimentConfig& cfg,
                                 const std::filesystem::path& out_dir) {
  ExperimentResult result;
  const BuiltProblem bp = build_problem(cfg);
  std::vector<SummaryRow> summary;
  for (Method method : cfg.methods) {
    const auto runs = run_cells(cfg, bp, method, /*store_iterates=*/true);
    std::vector<CsvRow> rows;
    for (const Trajectory& traj : runs) {
      const auto r = trajectory_rows(traj, *bp.oracle, bp.ref);
      rows.insert(rows.end(), r.begin(), r.end());
      if (traj.diverged) {
        result.exit_code = 1;
        result.log.push_back("divergence: method " + method_name(method) +
                             " seed " + std::to_string(traj.seed) +
                             " epoch " + std::to_string(traj.diverged->epoch) +
                             " step " + std::to_string(traj.diverged->step));
      }
    }
    const auto path = out_dir / ("trajectory_" + method_name(method) + ".csv");
    std::ofstream f(path);
    write_trajectory_csv(f, rows);
    result.files.push_back(path);
    const auto sm = summarize_ensemble(runs);
    summary.insert(summary.end(), sm.begin(), sm.end());
  }
  const auto spath = out_dir / "summary.csv";
  std::ofstream f(spath);
  write_summary_csv(f, summary);
  result.files.push_back(spath);
  result.log.push_back("wrote " + std::to_string(result.files.size()) +
                       " files to " + out_dir.string());
  return result;
}

// Global minimum of a 1-d objective by coarse grid + local refinement; used
// for the nonconvex cosine family where the reference solve is only
// stationary.
double global_min_value_1d(const ProblemOracle& p, double lo, double hi) {
  const int kGrid = 20000;
  double best_x = lo, best_f = std::numeric_limits<double>::infinity();
  Vector x(1);
  for (int i = 0; i <= kGrid; ++i) {
    x[0] = lo + (hi - lo) * i / kGrid;
    const double f = p.value(x);
    if (f < best_f) {
      best_f = f;
      best_x = x[0];
    }
  }
  // Newton polish on the smooth objective.
  double t = best_x;
  for (int it = 0; it < 60; ++it) {
    x[0] = t;
    const double g = p.gradient(x)[0];
    const double h = 1e-5;
    Vector xp(1), xm(1);
    xp[0] = t + h;
    xm[0] = t - h;
    const double curv = (p.gradient(xp)[0] - p.gradient(xm)[0]) / (2 * h);
    if (!(curv > 0.0)) break;
    const double step = g / curv;
    t -= step;
    if (std::abs(step) < 1e-14) break;
  }
  x[0] = t;
  return std::min(best_f, p.value(x));
}

std::optional<double> resolve_f_star(const ExperimentConfig& cfg,
                                     const BuiltProblem& bp) {
  if (bp.ref.f_star) return bp.ref.f_star;
  if (cfg.problem == ExperimentConfig::ProblemKind::kCosine &&
      bp.oracle->dim() == 1) {
    double lo = cfg.centers.front()[0], hi = lo;
    for (const Vector& c : cfg.centers) {
      lo = std::min(lo, c[0]);
      hi = std::max(hi, c[0]);
    }
    return global_min_value_1d(*bp.oracle, lo - 8.0, hi + 8.0);
  }
  return std::nullopt;
}

ExperimentResult do_bound_check(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir) {
  ExperimentResult result;
  if (!cfg.constant_schedule)
    throw ConfigError("bound-check mode needs schedule = constant");
  const BuiltProblem bp = build_problem(cfg);
  std::vector<CheckRow> rows;

  // Ensembles once per method.
  std::map<Method, std::vector<Trajectory>> ensembles;
  for (Method m : cfg.methods)
    ensembles[m] = run_cells(cfg, bp, m, /*store_iterates=*/true);

  for (TheoremId id : cfg.theorems) {
    for (Method m : cfg.methods) {
      const auto& runs = ensembles[m];
      CheckRow row;
      row.theorem = theorem_name(id);
      row.method = method_name(m);
      row.gamma = cfg.gamma;
      row.epochs = cfg.epochs;
      row.seeds = runs.size();
      row.slack = cfg.slack;
      try {
        CheckOptions opts;
        opts.num_perms = cfg.num_perms;
        opts.mc_seed = cfg.mc_seed;
        opts.threads = cfg.threads;
        opts.x_star = bp.ref.x_star;
        opts.f_star = resolve_f_star(cfg, bp);
        if (id == TheoremId::kThm4NC || id == TheoremId::kThm4PL ||
            id == TheoremId::kIgNC) {
          std::vector<Vector> visited;
          for (const Trajectory& t : runs)
            visited.insert(visited.end(), t.epoch_iterates.begin(),
                           t.epoch_iterates.end());
          opts.ab = assumption2_constants(*bp.oracle, visited);
        }
        const BoundCheck check =
            check_bound(id, *bp.oracle, runs, cfg.gamma, cfg.slack, opts);
        row.observed = check.observed;
        row.rhs = check.rhs;
        row.ci_halfwidth = check.ci_halfwidth;
        row.pass = check.pass;
        if (!check.pass) result.exit_code = 1;
        rows.push_back(row);
        // Conditional per-permutation rows for SO: one fixed initial
        // permutation each, reported for information only.
        if (m == Method::kSO &&
            (id == TheoremId::kThm1 || id == TheoremId::kThm2)) {
          for (const Trajectory& t : runs) {
            CheckRow cond = row;
            cond.seeds = 1;
            cond.observed =
                (t.epoch_iterates.back() - *bp.ref.x_star).squaredNorm();
            cond.ci_halfwidth = 0.0;
            cond.pass = *cond.observed <= *row.rhs * (1.0 + cfg.slack);
            cond.note = "conditional seed=" + std::to_string(t.seed);
            rows.push_back(cond);
          }
        }
      } catch (const PreconditionError& err) {
        row.pass = false;
        row.note = std::string("refused: ") + err.what();
        result.exit_code = 1;
        rows.push_back(row);
      }
    }
  }
  const auto path = out_dir / "bound_checks.csv";
  std::ofstream f(path);
  write_check_csv(f, rows);
  result.files.push_back(path);
  for (const CheckRow& r : rows)
    if (r.note.rfind("conditional", 0) != 0)
      result.log.push_back(r.theorem + " " + r.method + ": " +
                           (r.pass ? "pass" : "FAIL") +
                           (r.note.empty() ? "" : " (" + r.note + ")"));
  return result;
}

ExperimentResult do_sweep(const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir) {
  ExperimentResult result;
  const auto rows = variance_sweep(cfg);
  const auto path = out_dir / "sweep.csv";
  std::ofstream f(path);
  write_sweep_csv(f, rows);
  result.files.push_back(path);

  if (cfg.dist_samples > 0) {
    const BuiltProblem bp = build_problem(cfg);
    const int tau = cfg.sweep_tau > 0 ? cfg.sweep_tau : 1;
    ProblemPtr grouped =
        bp.regroup ? bp.regroup(group_minibatches(
                         bp.N, tau, base_sample_order(cfg, bp.N)))
                   : bp.oracle;
    const ReferenceSolution sol = solve_reference(*grouped);
    const double gamma =
        cfg.sweep_gamma > 0.0 ? cfg.sweep_gamma
                              : 1.0 / (2.0 * grouped->constants().L);
    const auto dpath = out_dir / "distribution.csv";
    std::ofstream df(dpath);
    df << "perm_index,sigma_shuffle_sq\n";
    SplitMix64 rng(derive_stream(cfg.mc_seed, 0x44495354));
    for (long i = 0; i < cfg.dist_samples; ++i) {
      const Permutation pi =
          sample_permutation(rng, grouped->num_components());
      df << i << ','
         << format_double(
                sigma_shuffle_sq_of_permutation(*grouped, sol.x, gamma, pi))
         << '\n';
    }
    result.files.push_back(dpath);
  }
  result.log.push_back("wrote sweep with " + std::to_string(rows.size()) +
                       " rows");
  return result;
}

}  // namespace

std::vector<SweepRow> variance_sweep(const ExperimentConfig& cfg) {
  if (cfg.mode != ExperimentConfig::Mode::kVarianceSweep)
    throw ConfigError("variance_sweep needs mode = variance-sweep");
  const BuiltProblem bp = build_problem(cfg);
  if (cfg.tau_grid.empty() && cfg.gamma_grid.empty())
    throw ConfigError("variance-sweep needs tau_grid and/or gamma_grid");

  std::vector<SweepRow> rows;
  auto add_row = [&](const ProblemOracle& p, int tau, double gamma) {
    const ReferenceSolution sol = solve_reference(p);
    // Exact enumeration whenever it is affordable; Monte Carlo only beyond
    // the factorial cap.
    long perms = p.num_components() <= kEnumerationCap ? 0 : cfg.num_perms;
    if (perms == 0 && p.num_components() > kEnumerationCap)
      throw ConfigError(
          "n > 8 components: set num_perms for Monte Carlo estimation");
    const VarianceReport rep = sigma_shuffle_sq(p, sol.x, gamma, perms,
                                                cfg.mc_seed, cfg.threads);
    SweepRow row;
    row.tau = tau;
    row.gamma = gamma;
    row.n_components = p.num_components();
    row.sigma_star_sq = rep.sigma_star_sq;
    row.sigma_shuffle_sq = rep.sigma_shuffle_sq;
    row.ci_halfwidth = rep.ci_halfwidth;
    row.num_permutations = rep.num_permutations;
    row.exact = rep.exact;
    row.prop1_lower = rep.prop1_lower;
    row.prop1_upper = rep.prop1_upper;
    rows.push_back(row);
  };

  if (!cfg.tau_grid.empty()) {
    if (!bp.regroup)
      throw ConfigError("tau sweep needs a dataset-backed problem");
    const double gamma = cfg.sweep_gamma > 0.0
                             ? cfg.sweep_gamma
                             : 1.0 / (2.0 * bp.samples->constants().L);
    for (int tau : cfg.tau_grid) {
      ProblemPtr grouped = bp.regroup(
          group_minibatches(bp.N, tau, base_sample_order(cfg, bp.N)));
      add_row(*grouped, tau, gamma);
    }
  }
  if (!cfg.gamma_grid.empty()) {
    ProblemPtr p = bp.oracle;
    int tau = cfg.tau > 0 ? cfg.tau : 1;
    if (cfg.sweep_tau > 0) {
      if (!bp.regroup)
        throw ConfigError("sweep_tau needs a dataset-backed problem");
      tau = cfg.sweep_tau;
      p = bp.regroup(
          group_minibatches(bp.N, tau, base_sample_order(cfg, bp.N)));
    }
    for (double gamma : cfg.gamma_grid) add_row(*p, tau, gamma);
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  switch (cfg.mode) {
    case ExperimentConfig::Mode::kTrajectories:
      return do_trajectories(cfg, out_dir);
    case ExperimentConfig::Mode::kBoundCheck:
      return do_bound_check(cfg, out_dir);
    case ExperimentConfig::Mode::kVarianceSweep:
      return do_sweep(cfg, out_dir);
  }
  throw std::logic_error("unreachable");
}

}  // namespace reshuffle
