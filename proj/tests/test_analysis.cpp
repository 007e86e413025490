#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reshuffle/analysis.hpp"
#include "reshuffle/dataset.hpp"
#include "reshuffle/stats.hpp"

using namespace reshuffle;

namespace {

Vector scalar(double v) {
  Vector x(1);
  x[0] = v;
  return x;
}

ProblemPtr quad036() {
  return make_quadratic(QuadraticSpec::scalars({0.0, 3.0, 6.0}));
}

Vector random_vector(SplitMix64& rng, int d, double scale = 3.0) {
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = scale * (2.0 * rng.next_unit() - 1.0);
  return x;
}

std::vector<std::uint64_t> seed_range(std::uint64_t count,
                                      std::uint64_t start = 0) {
  std::vector<std::uint64_t> seeds(count);
  for (std::uint64_t i = 0; i < count; ++i) seeds[i] = start + i;
  return seeds;
}

RunConfig rr_config(double gamma, int T, bool inner = false) {
  RunConfig cfg;
  cfg.scheme = OrderingScheme::rr();
  cfg.schedule = StepSchedule::constant(gamma);
  cfg.epochs = T;
  cfg.record_inner = inner;
  return cfg;
}

}  // namespace

TEST_CASE("bregman divergence") {
  auto p = quad036();
  const Vector x = scalar(1.7), y = scalar(-0.4);
  for (int i = 0; i < 3; ++i) CHECK(bregman(*p, i, x, x) == 0.0);
  // unit curvature: D = (x-y)^2 / 2
  auto unit = make_quadratic(QuadraticSpec::scalars({0.0}));
  CHECK(bregman(*unit, 0, scalar(2.0), scalar(0.0)) == doctest::Approx(2.0));

  // sandwich (mu/2)||x-y||^2 <= D <= (L/2)||x-y||^2, an equality here
  SplitMix64 rng(3);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vector a = random_vector(rng, 1), b = random_vector(rng, 1);
    const double d = bregman(*p, rep % 3, a, b);
    const double half_sq = 0.5 * (a - b).squaredNorm();
    CHECK(d == doctest::Approx(half_sq).epsilon(1e-9));
  }
}

TEST_CASE("limit points") {
  auto p = quad036();
  const Vector x_star = scalar(3.0);
  const LimitPoints lp = limit_points(*p, x_star, 0.1, {0, 1, 2});
  REQUIRE(lp.points.size() == 2);
  CHECK(lp.points[0][0] == doctest::Approx(2.7));
  CHECK(lp.points[1][0] == doctest::Approx(2.7));
  CHECK(lp.at(0) == x_star);

  const LimitPoints zero = limit_points(*p, x_star, 0.0, {2, 1, 0});
  for (const Vector& v : zero.points) CHECK(v == x_star);

  auto same = make_quadratic(QuadraticSpec::scalars({4.0, 4.0, 4.0}));
  const LimitPoints ident = limit_points(*same, scalar(4.0), 0.3, {0, 1, 2});
  for (const Vector& v : ident.points) CHECK(v[0] == doctest::Approx(4.0));

  // the implied x*^n folds back onto x*: the component gradients sum to zero
  SplitMix64 rng(19);
  QuadraticSpec spec;
  for (int i = 0; i < 5; ++i) {
    spec.centers.push_back(random_vector(rng, 3));
    spec.curvatures.push_back(0.5 + rng.next_unit());
  }
  auto q = make_quadratic(spec);
  const Vector xq = *q->closed_form_minimizer();
  Vector full = Vector::Zero(3);
  for (int j = 0; j < 5; ++j) full += q->component_gradient(j, xq);
  CHECK((xq - 0.1 * full - xq).norm() <= 1e-12);

  CHECK_THROWS_AS(limit_points(*p, scalar(1.0), 0.1, {0, 1, 2}),
                  std::invalid_argument);  // not a minimizer
}

TEST_CASE("sigma_star_sq") {
  auto p = quad036();
  CHECK(sigma_star_sq(*p, scalar(3.0)) == doctest::Approx(6.0));
  auto same = make_quadratic(QuadraticSpec::scalars({2.0, 2.0}));
  CHECK(sigma_star_sq(*same, scalar(2.0)) == 0.0);
  auto single = make_quadratic(QuadraticSpec::scalars({5.0}));
  CHECK(sigma_star_sq(*single, scalar(5.0)) == 0.0);
}

TEST_CASE("exact shuffling variance on the three-center quadratic") {
  auto p = quad036();
  const Vector x_star = scalar(3.0);
  for (double gamma : {0.2, 0.1, 0.01}) {
    const VarianceReport rep = sigma_shuffle_sq(*p, x_star, gamma);
    CHECK(rep.exact);
    CHECK(std::abs(rep.sigma_shuffle_sq - 3.0 * gamma) <= 1e-12);
    CHECK(rep.prop1_lower == doctest::Approx(2.25 * gamma));
    CHECK(rep.prop1_upper == doctest::Approx(4.5 * gamma));
    CHECK(rep.prop1_lower <= rep.sigma_shuffle_sq);
    CHECK(rep.sigma_shuffle_sq <= rep.prop1_upper);
  }
  // identical components: zero variance
  auto same = make_quadratic(QuadraticSpec::scalars({1.0, 1.0, 1.0}));
  CHECK(sigma_shuffle_sq(*same, scalar(1.0), 0.5).sigma_shuffle_sq == 0.0);
  // n = 1 convention
  auto single = make_quadratic(QuadraticSpec::scalars({2.0}));
  CHECK(sigma_shuffle_sq(*single, scalar(2.0), 0.5).sigma_shuffle_sq == 0.0);
}

TEST_CASE("shuffling variance is homogeneous in gamma for uniform quadratics") {
  SplitMix64 rng(13);
  QuadraticSpec spec;
  for (int i = 0; i < 5; ++i) {
    spec.centers.push_back(random_vector(rng, 2));
    spec.curvatures.push_back(1.0);
  }
  auto p = make_quadratic(spec);
  const Vector x_star = *p->closed_form_minimizer();
  const double a = sigma_shuffle_sq(*p, x_star, 0.05).sigma_shuffle_sq;
  const double b = sigma_shuffle_sq(*p, x_star, 0.10).sigma_shuffle_sq;
  CHECK(std::abs(b - 2.0 * a) <= 1e-12 * std::max(1.0, b));
}

TEST_CASE("Lemma-1 concordance: closed form for unit-curvature quadratics") {
  SplitMix64 rng(29);
  for (int n = 2; n <= 6; ++n) {
    QuadraticSpec spec;
    for (int i = 0; i < n; ++i) {
      spec.centers.push_back(random_vector(rng, 2));
      spec.curvatures.push_back(1.0);
    }
    auto p = make_quadratic(spec);
    const Vector x_star = *p->closed_form_minimizer();
    const double sstar = sigma_star_sq(*p, x_star);
    const double gamma = 0.07;
    int max_i_ni = 0;
    for (int i = 1; i <= n - 1; ++i) max_i_ni = std::max(max_i_ni, i * (n - i));
    const double closed =
        gamma * max_i_ni / (2.0 * (n - 1)) * sstar;
    const double exact =
        sigma_shuffle_sq(*p, x_star, gamma).sigma_shuffle_sq;
    CHECK(exact == doctest::Approx(closed).epsilon(1e-10));
  }
}

TEST_CASE("Monte Carlo estimate agrees with enumeration and is deterministic") {
  SplitMix64 rng(41);
  QuadraticSpec spec;
  for (int i = 0; i < 5; ++i) {
    spec.centers.push_back(random_vector(rng, 2));
    spec.curvatures.push_back(0.5 + rng.next_unit());
  }
  auto p = make_quadratic(spec);
  const ReferenceSolution sol = solve_reference(*p);
  const double gamma = 0.1;
  const VarianceReport exact = sigma_shuffle_sq(*p, sol.x, gamma);
  const VarianceReport mc = sigma_shuffle_sq(*p, sol.x, gamma, 20000, 7);
  CHECK(std::abs(mc.sigma_shuffle_sq - exact.sigma_shuffle_sq) <=
        4.0 * mc.ci_halfwidth + 1e-12);
  // deterministic given the seed; serial equals parallel
  const VarianceReport mc2 = sigma_shuffle_sq(*p, sol.x, gamma, 20000, 7, 3);
  const VarianceReport mcs = sigma_shuffle_sq_serial(*p, sol.x, gamma, 20000, 7);
  CHECK(mc.sigma_shuffle_sq == mc2.sigma_shuffle_sq);
  CHECK(mc.sigma_shuffle_sq == mcs.sigma_shuffle_sq);
  CHECK(mc.ci_halfwidth == mcs.ci_halfwidth);
  CHECK_THROWS_AS(sigma_shuffle_sq(*p, sol.x, gamma, 1), std::invalid_argument);
  // exact mode sits inside the Prop-1 sandwich for a gamma <= 1/L grid
  for (double g : {0.9 / p->constants().L, 0.3, 0.05, 0.001}) {
    const VarianceReport rep = sigma_shuffle_sq(*p, sol.x, g);
    CHECK(rep.prop1_lower <= rep.sigma_shuffle_sq * (1 + 1e-12));
    CHECK(rep.sigma_shuffle_sq <= rep.prop1_upper * (1 + 1e-12));
  }
}

TEST_CASE("prop1 bounds") {
  const auto [lo, hi] = prop1_bounds(0.1, 1.0, 1.0, 3, 6.0);
  CHECK(lo == doctest::Approx(0.225));
  CHECK(hi == doctest::Approx(0.45));
  const auto [lo0, hi0] = prop1_bounds(0.1, 1.0, 1.0, 3, 0.0);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == 0.0);
  const auto [l, h] = prop1_bounds(0.2, 2.0, 2.0, 5, 1.3);
  CHECK(h / l == doctest::Approx(2.0));
}

TEST_CASE("Assumption-2 constants") {
  auto p = quad036();
  const AssumptionConstants ab = assumption2_constants(*p, 3.0);
  CHECK(ab.A == doctest::Approx(1.0));
  CHECK(ab.B_sq == doctest::Approx(6.0));
  CHECK(ab.provenance == AssumptionConstants::Provenance::kProp2Analytic);

  auto single = make_quadratic(QuadraticSpec::scalars({5.0}));
  CHECK(assumption2_constants(*single, 0.0).B_sq == doctest::Approx(0.0));

  // the bound holds with equality at the optimum of this family
  CHECK(gradient_variance(*p, scalar(3.0)) == doctest::Approx(6.0));
  CHECK(gradient_variance(*p, scalar(3.0)) <= 2.0 * ab.A * 0.0 + ab.B_sq + 1e-12);

  // grid route: smallest A = 0 constant valid on the grid
  std::vector<Vector> grid = {scalar(0.0), scalar(3.0), scalar(10.0)};
  const AssumptionConstants gr = assumption2_constants(*p, grid);
  CHECK(gr.A == 0.0);
  CHECK(gr.provenance == AssumptionConstants::Provenance::kGridEstimate);
  double want = 0.0;
  for (const Vector& x : grid) want = std::max(want, gradient_variance(*p, x));
  CHECK(gr.B_sq == doctest::Approx(want));

  // analytic route requires infima
  auto cosine = make_cosine_quadratic({scalar(0.0)});
  CHECK_THROWS_AS(assumption2_constants(*cosine, 0.0), std::invalid_argument);
}

TEST_CASE("epoch deviations") {
  auto p = make_quadratic(QuadraticSpec::scalars({0.0, 2.0}));
  RunConfig cfg;
  cfg.scheme = OrderingScheme::ig(Permutation{0, 1});
  cfg.schedule = StepSchedule::constant(0.5);
  cfg.epochs = 1;
  cfg.record_inner = true;
  cfg.x0 = scalar(0.0);
  const Trajectory traj = run(cfg, *p);
  const EpochDeviations dev = epoch_deviations(traj, 0);
  CHECK(dev.backward == doctest::Approx(1.0));
  CHECK(dev.forward == doctest::Approx(2.0));

  // gamma = 0: both deviations vanish
  RunConfig still = cfg;
  still.schedule = StepSchedule::constant(0.0);
  const Trajectory fixed = run(still, *p);
  const EpochDeviations none = epoch_deviations(fixed, 0);
  CHECK(none.backward == 0.0);
  CHECK(none.forward == 0.0);

  // n = 1: V_t = gamma^2 ||grad f(x_t)||^2
  auto single = make_quadratic(QuadraticSpec::scalars({3.0}));
  RunConfig one;
  one.scheme = OrderingScheme::ig();
  one.schedule = StepSchedule::constant(0.25);
  one.epochs = 1;
  one.record_inner = true;
  one.x0 = scalar(1.0);
  const Trajectory t1 = run(one, *single);
  const double expected =
      0.25 * 0.25 * t1.epoch_metrics[0].grad_norm_sq;
  CHECK(epoch_deviations(t1, 0).backward == doctest::Approx(expected));

  CHECK_THROWS_AS(epoch_deviations(traj, 5), std::invalid_argument);
}

TEST_CASE("recommended stepsizes") {
  StepsizeParams p;
  p.L = 1.0;
  p.mu = 1.0;
  p.n = 4;
  p.T = 10;
  p.r0 = 1.0;
  p.sigma_star = 1.0;
  const StepsizeChoice c1 = recommended_stepsize(TheoremId::kThm1, p);
  CHECK(c1.gamma == doctest::Approx(0.14978661367769956).epsilon(1e-12));
  CHECK_FALSE(c1.fallback);

  // log argument <= 1: fall back to 1/L, flagged
  StepsizeParams tiny = p;
  tiny.r0 = 1e-8;
  const StepsizeChoice cf = recommended_stepsize(TheoremId::kThm1, tiny);
  CHECK(cf.gamma == doctest::Approx(1.0));
  CHECK(cf.fallback);

  // variance-free problems take the smoothness cap
  StepsizeParams free = p;
  free.sigma_star = 0.0;
  CHECK(recommended_stepsize(TheoremId::kThm3, free).gamma ==
        doctest::Approx(1.0 / (std::sqrt(2.0) * 4.0)));

  StepsizeParams nc;
  nc.L = 2.0;
  nc.n = 8;
  nc.T = 50;
  nc.A = 0.0;
  nc.B = 1.0;
  nc.epsilon = 0.0;
  CHECK(recommended_stepsize(TheoremId::kThm4NC, nc).gamma ==
        doctest::Approx(1.0 / 32.0));
  nc.A = 2.0;
  const double limb =
      1.0 / (std::cbrt(2.0) * std::pow(2.0, 2.0 / 3.0) *
             std::pow(8.0, 2.0 / 3.0) * std::cbrt(50.0));
  CHECK(recommended_stepsize(TheoremId::kThm4NC, nc).gamma ==
        doctest::Approx(std::min(1.0 / 32.0, limb)));

  // accuracy limb: eps / (2 L sqrt(n) B), with A = 0 dropping the middle term
  nc.A = 0.0;
  nc.B = 2.0;
  nc.epsilon = 0.1;
  CHECK(recommended_stepsize(TheoremId::kThm4NC, nc).gamma ==
        doctest::Approx(std::min(1.0 / 32.0,
                                 0.1 / (2.0 * 2.0 * std::sqrt(8.0) * 2.0))));
}

TEST_CASE("check_bound: exact one-step contraction at n = 1") {
  auto p = make_quadratic(QuadraticSpec::scalars({0.0}));
  RunConfig cfg = rr_config(1.0, 1);
  cfg.x0 = scalar(1.0);
  const auto runs = run_ensemble(cfg, *p, seed_range(3), 1);
  const BoundCheck check = check_bound(TheoremId::kThm1, *p, runs, 1.0);
  CHECK(check.observed == 0.0);
  CHECK(check.rhs == 0.0);
  CHECK(check.pass);
}

TEST_CASE("check_bound: thm1 on the three-center quadratic") {
  auto p = quad036();
  RunConfig cfg = rr_config(0.1, 30);
  const auto runs = run_ensemble(cfg, *p, seed_range(400), 0);
  const BoundCheck check = check_bound(TheoremId::kThm1, *p, runs, 0.1);
  // rhs = 0.9^90 * 9 + 2 * 0.1 * 0.3 / 1, approximately 0.0607
  CHECK(check.rhs == doctest::Approx(std::pow(0.9, 90) * 9.0 + 0.06));
  CHECK(check.observed <= check.rhs + check.ci_halfwidth);
  CHECK(check.pass);
}

TEST_CASE("check_bound refusals") {
  auto p = quad036();
  RunConfig cfg = rr_config(1.5, 5);  // stepsize above 1/L
  const auto runs = run_ensemble(cfg, *p, seed_range(4), 1);
  CHECK_THROWS_AS(check_bound(TheoremId::kThm1, *p, runs, 1.5),
                  PreconditionError);

  // method mismatch: IG runs cannot certify thm1
  RunConfig ig = cfg;
  ig.scheme = OrderingScheme::ig();
  ig.schedule = StepSchedule::constant(0.1);
  const auto ig_runs = run_ensemble(ig, *p, seed_range(1), 1);
  CHECK_THROWS_AS(check_bound(TheoremId::kThm1, *p, ig_runs, 0.1),
                  PreconditionError);

  // class mismatch: the cosine family is not strongly convex
  auto cosine = make_cosine_quadratic({scalar(0.0), scalar(1.0)});
  RunConfig cc = rr_config(0.05, 5);
  cc.x0 = scalar(0.5);
  const auto cruns = run_ensemble(cc, *cosine, seed_range(4), 1);
  CHECK_THROWS_AS(check_bound(TheoremId::kThm1, *cosine, cruns, 0.05),
                  PreconditionError);

  // empty ensemble
  CHECK_THROWS_AS(
      check_bound(TheoremId::kThm1, *p, std::span<const Trajectory>{}, 0.1),
      PreconditionError);

  // thm4-nc without Assumption-2 constants
  CHECK_THROWS_AS(check_bound(TheoremId::kThm4NC, *p,
                              run_ensemble(rr_config(0.05, 5), *p,
                                           seed_range(2), 1),
                              0.05),
                  PreconditionError);
}

TEST_CASE("check_bound: IG single runs, no CI") {
  auto p = quad036();
  RunConfig cfg;
  cfg.scheme = OrderingScheme::ig();
  cfg.schedule = StepSchedule::constant(0.1);
  cfg.epochs = 30;
  cfg.x0 = Vector::Zero(1);
  const Trajectory traj = run(cfg, *p);
  const std::vector<Trajectory> single = {traj};
  const BoundCheck sc = check_bound(TheoremId::kIgSC, *p, single, 0.1);
  CHECK(sc.ci_halfwidth == 0.0);
  CHECK(sc.rhs == doctest::Approx(std::pow(0.9, 90) * 9.0 + 0.54));
  CHECK(sc.pass);
}

TEST_CASE("check_bound: grouped logistic regression end to end") {
  // 32 samples, tau = 4 -> n = 8 minibatch components, exact enumeration
  SplitMix64 rng(77);
  LogisticSpec spec;
  spec.features.rows = 32;
  spec.features.cols = 3;
  Vector truth(3);
  truth << 1.0, -2.0, 0.5;
  for (int i = 0; i < 32; ++i) {
    SparseRow r;
    Vector a(3);
    for (int k = 0; k < 3; ++k) {
      a[k] = 2.0 * rng.next_unit() - 1.0;
      r.idx.push_back(k);
      r.val.push_back(a[k]);
    }
    spec.features.row.push_back(r);
    spec.labels.push_back(
        a.dot(truth) + 0.3 * (2.0 * rng.next_unit() - 1.0) > 0 ? 1.0 : 0.0);
  }
  spec.lambda = default_regularizer(logistic_smoothness(spec.features, 0.0).L_max,
                                    32);
  auto p = make_logistic(spec, group_minibatches(32, 4).groups);
  REQUIRE(p->num_components() == 8);
  REQUIRE(p->constants().convexity == ConvexityClass::kEachStronglyConvex);

  const ReferenceSolution sol = solve_reference(*p);
  CHECK(sol.grad_norm <= 1e-8);

  const double gamma = 0.9 / p->constants().L;
  const VarianceReport rep = sigma_shuffle_sq(*p, sol.x, gamma);
  CHECK(rep.exact);
  CHECK(rep.prop1_lower <= rep.sigma_shuffle_sq);
  CHECK(rep.sigma_shuffle_sq <= rep.prop1_upper);

  RunConfig rc = rr_config(gamma, 40);
  rc.x0 = Vector::Zero(3);
  const auto runs = run_ensemble(rc, *p, seed_range(400), 0);
  CheckOptions opts;
  opts.x_star = sol.x;
  CHECK(check_bound(TheoremId::kThm1, *p, runs, gamma, 0.0, opts).pass);

  const double g2 = 1.0 / (std::sqrt(2.0) * p->constants().L * 8);
  rc.schedule = StepSchedule::constant(g2);
  const auto runs2 = run_ensemble(rc, *p, seed_range(400), 0);
  CHECK(check_bound(TheoremId::kThm2, *p, runs2, g2, 0.0, opts).pass);
  CHECK(check_bound(TheoremId::kThm3, *p, runs2, g2, 0.0, opts).pass);
}

TEST_CASE("check_bound: SGD baseline and the PL branch") {
  auto p = quad036();
  // SGD baseline at gamma <= 1/(2L)
  RunConfig sgd;
  sgd.scheme = OrderingScheme::sgd_iid();
  sgd.schedule = StepSchedule::constant(0.2);
  sgd.epochs = 25;
  sgd.x0 = Vector::Zero(1);
  const auto sruns = run_ensemble(sgd, *p, seed_range(500), 0);
  const BoundCheck sc = check_bound(TheoremId::kSgdSC, *p, sruns, 0.2);
  CHECK(sc.rhs ==
        doctest::Approx(std::pow(0.8, 75) * 9.0 + 2.0 * 0.2 * 6.0));
  CHECK(sc.pass);
  // gamma above 1/(2L) is refused
  RunConfig fast = sgd;
  fast.schedule = StepSchedule::constant(0.6);
  const auto fruns = run_ensemble(fast, *p, seed_range(4), 1);
  CHECK_THROWS_AS(check_bound(TheoremId::kSgdSC, *p, fruns, 0.6),
                  PreconditionError);

  // PL branch: unit curvature means the gradient variance is 6 everywhere,
  // so A = 0 with B^2 = 6 is exact, and pl_mu = mu = 1.
  const double gamma = 1.0 / (2.0 * 3.0);
  RunConfig rr = rr_config(gamma, 25);
  const auto runs = run_ensemble(rr, *p, seed_range(500), 0);
  CheckOptions opts;
  opts.ab = AssumptionConstants{0.0, 6.0,
                                AssumptionConstants::Provenance::kGridEstimate};
  opts.f_star = 3.0;
  const BoundCheck pl =
      check_bound(TheoremId::kThm4PL, *p, runs, gamma, 0.0, opts);
  const double expected_rhs = std::pow(1.0 - gamma * 3.0 / 2.0, 25) * 4.5 +
                              gamma * gamma * 1.0 * 1.0 * 3.0 * 6.0;
  CHECK(pl.rhs == doctest::Approx(expected_rhs));
  CHECK(pl.pass);

  // A != 0 is refused for the PL branch
  CheckOptions bad = opts;
  bad.ab = AssumptionConstants{1.0, 6.0,
                               AssumptionConstants::Provenance::kProp2Analytic};
  CHECK_THROWS_AS(check_bound(TheoremId::kThm4PL, *p, runs, gamma, 0.0, bad),
                  PreconditionError);
}

TEST_CASE("thm1 proof recursion holds inside epochs in expectation") {
  auto p = quad036();
  const Vector x_star = scalar(3.0);
  const double gamma = 0.1, mu = 1.0;
  const int T = 6, n = 3;
  RunConfig cfg = rr_config(gamma, T, /*inner=*/true);
  const auto runs = run_ensemble(cfg, *p, seed_range(800), 0);
  const double sigma_sh =
      sigma_shuffle_sq(*p, x_star, gamma).sigma_shuffle_sq;

  std::vector<Vector> grads(n);
  for (int j = 0; j < n; ++j) grads[j] = p->component_gradient(j, x_star);

  std::vector<double> diff(runs.size());
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < runs.size(); ++s) {
        const Trajectory& traj = runs[s];
        const LimitPoints lp = limit_points_from_gradients(
            grads, x_star, gamma, traj.realized_orderings[t]);
        const Vector& x_i =
            i == 0 ? traj.epoch_iterates[t] : traj.inner_iterates[t][i - 1];
        const Vector& x_next = traj.inner_iterates[t][i];
        // x*^n folds back to x* because the component gradients sum to zero
        const Vector& star_next = i + 1 == n ? x_star : lp.at(i + 1);
        diff[s] = (x_next - star_next).squaredNorm() -
                  (1.0 - gamma * mu) * (x_i - lp.at(i)).squaredNorm();
      }
      const MeanCI m = mean_ci(diff);
      CHECK(m.mean <= 2.0 * gamma * gamma * sigma_sh + m.ci_halfwidth);
    }
  }
}

TEST_CASE("backward-deviation lemma holds in expectation") {
  SplitMix64 rng(53);
  QuadraticSpec spec;
  const int n = 5;
  for (int i = 0; i < n; ++i) {
    spec.centers.push_back(random_vector(rng, 2));
    spec.curvatures.push_back(1.0);
  }
  auto p = make_quadratic(spec);
  const double L = p->constants().L;
  const double gamma = 1.0 / (2.0 * L * n);
  const int T = 8;
  RunConfig cfg = rr_config(gamma, T, /*inner=*/true);
  cfg.x0 = Vector::Constant(2, 2.0);
  const auto runs = run_ensemble(cfg, *p, seed_range(600), 0);

  std::vector<double> diff(runs.size());
  for (int t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < runs.size(); ++s) {
      const Trajectory& traj = runs[s];
      const double vt = epoch_deviations(traj, t).backward;
      const double g2 = traj.epoch_metrics[t].grad_norm_sq;
      const double st2 = gradient_variance(*p, traj.epoch_iterates[t]);
      diff[s] = vt - gamma * gamma * double(n) * n * n * g2 -
                gamma * gamma * double(n) * n * st2;
    }
    const MeanCI m = mean_ci(diff);
    CHECK(m.mean <= m.ci_halfwidth);
  }
}

TEST_CASE("forward-deviation lemma holds in expectation") {
  auto p = quad036();
  const Vector x_star = scalar(3.0);
  const int n = 3, T = 8;
  const double L = 1.0;
  const double gamma = 1.0 / (std::sqrt(2.0) * L * n);
  const double sstar = sigma_star_sq(*p, x_star);
  RunConfig cfg = rr_config(gamma, T, /*inner=*/true);
  const auto runs = run_ensemble(cfg, *p, seed_range(600), 0);

  std::vector<double> diff(runs.size());
  for (int t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < runs.size(); ++s) {
      const Trajectory& traj = runs[s];
      const double fwd = epoch_deviations(traj, t).forward;
      double bsum = 0.0;
      for (int i = 0; i < n; ++i) {
        const Vector& x_i =
            i == 0 ? traj.epoch_iterates[t] : traj.inner_iterates[t][i - 1];
        bsum += bregman(*p, traj.realized_orderings[t][i], x_star, x_i);
      }
      diff[s] = fwd - 4.0 * gamma * gamma * double(n) * n * L * bsum -
                0.5 * gamma * gamma * double(n) * n * sstar;
    }
    const MeanCI m = mean_ci(diff);
    CHECK(m.mean <= m.ci_halfwidth);
  }
}

TEST_CASE("epoch descent violations") {
  auto p = quad036();
  const double gamma = 1.0 / (1.0 * 3);  // exactly 1/(Ln)
  RunConfig cfg = rr_config(gamma, 10, /*inner=*/true);
  cfg.x0 = scalar(-4.0);
  const auto runs = run_ensemble(cfg, *p, seed_range(50), 0);
  for (const Trajectory& traj : runs)
    CHECK(epoch_descent_violations(*p, traj).empty());

  RunConfig big = rr_config(0.9, 3, true);
  const Trajectory t = run(big, *p);
  CHECK_THROWS_AS(epoch_descent_violations(*p, t), PreconditionError);
}

TEST_CASE("basic vector identities on random inputs") {
  SplitMix64 rng(61);
  for (int rep = 0; rep < 200; ++rep) {
    const Vector a = random_vector(rng, 3), b = random_vector(rng, 3);
    CHECK(2.0 * a.dot(b) == doctest::Approx(a.squaredNorm() + b.squaredNorm() -
                                            (a - b).squaredNorm()));
    CHECK((a + b).squaredNorm() <=
          2.0 * a.squaredNorm() + 2.0 * b.squaredNorm() + 1e-12);
  }
  // Jensen over m vectors, and the variance decomposition
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_below(6));
    std::vector<Vector> ys;
    Vector mean = Vector::Zero(3);
    for (int i = 0; i < m; ++i) {
      ys.push_back(random_vector(rng, 3));
      mean += ys.back();
    }
    mean /= m;
    double mean_sq = 0.0, dev_sq = 0.0;
    Vector sum = Vector::Zero(3);
    for (const Vector& y : ys) {
      mean_sq += y.squaredNorm();
      dev_sq += (y - mean).squaredNorm();
      sum += y;
    }
    mean_sq /= m;
    dev_sq /= m;
    CHECK(mean.squaredNorm() <= mean_sq + 1e-12);                    // Jensen
    CHECK(sum.squaredNorm() <= m * (mean_sq * m) + 1e-9);            // sum bound
    CHECK(mean_sq == doctest::Approx(mean.squaredNorm() + dev_sq));  // decomp
  }
}

TEST_CASE("nonconvex recursion-solution lemma on random sequences") {
  SplitMix64 rng(67);
  for (int rep = 0; rep < 200; ++rep) {
    const double a = rng.next_unit() * 0.2;
    const double b = 0.1 + rng.next_unit();
    const double c = rng.next_unit();
    const int T = 2 + static_cast<int>(rng.next_below(20));
    std::vector<double> s(T + 1), q(T);
    s[0] = rng.next_unit() * 5.0;
    for (int t = 0; t < T; ++t) {
      const double cap = (1.0 + a) * s[t] + c;
      s[t + 1] = rng.next_unit() * cap;
      q[t] = rng.next_unit() * (cap - s[t + 1]) / b;
    }
    double min_q = q[0];
    for (double v : q) min_q = std::min(min_q, v);
    const double bound = std::pow(1.0 + a, T) / (b * T) * s[0] + c / b;
    CHECK(min_q <= bound * (1.0 + 1e-12) + 1e-12);
  }
}
