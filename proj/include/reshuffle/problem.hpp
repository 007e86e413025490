#ifndef RESHUFFLE_PROBLEM_HPP
#define RESHUFFLE_PROBLEM_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reshuffle/sparse.hpp"

namespace reshuffle {

enum class ConvexityClass {
  kEachStronglyConvex,  // every component is mu-strongly convex
  kFStronglyConvex,     // components convex, full objective mu-strongly convex
  kConvex,
  kNonConvex,
  kPolyakLojasiewicz,
};

// True when `have` implies the guarantees of `need`.
bool convexity_at_least(ConvexityClass have, ConvexityClass need);

struct ProblemConstants {
  double L = 0.0;   // smoothness of f and of every component
  double mu = 0.0;  // strong convexity (0 = merely convex or nonconvex)
  ConvexityClass convexity = ConvexityClass::kConvex;
  std::optional<double> pl_mu;  // Polyak-Lojasiewicz constant when known

  double kappa() const {
    if (mu <= 0.0) throw std::domain_error("kappa undefined: mu = 0");
    return L / mu;
  }
};

// A finite sum f(x) = (1/n) sum_i f_i(x) with per-component value/gradient
// access. Oracles are immutable after construction and safe to share across
// worker threads.
class ProblemOracle {
 public:
  virtual ~ProblemOracle() = default;

  int num_components() const { return n_; }
  int dim() const { return d_; }
  const ProblemConstants& constants() const { return constants_; }
  const std::optional<std::vector<double>>& component_infima() const {
    return infima_;
  }

  virtual double component_value(int i, const Vector& x) const = 0;
  virtual Vector component_gradient(int i, const Vector& x) const = 0;

  // Mean of component values / gradients.
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  // Exact minimizer when the problem admits one in closed form.
  virtual std::optional<Vector> closed_form_minimizer() const {
    return std::nullopt;
  }

 protected:
  ProblemOracle(int n, int d, ProblemConstants constants)
      : n_(n), d_(d), constants_(constants) {}

  void check_index(int i) const;
  void check_dim(const Vector& x) const;

  int n_;
  int d_;
  ProblemConstants constants_;
  std::optional<std::vector<double>> infima_;
};

using ProblemPtr = std::shared_ptr<const ProblemOracle>;

// ---------------------------------------------------------------------------
// Quadratics: f_i(x) = (a_i/2) ||x - b_i||^2
// ---------------------------------------------------------------------------

struct QuadraticSpec {
  std::vector<Vector> centers;      // b_i
  std::vector<double> curvatures;   // a_i > 0

  // 1-d convenience: centers from scalars, unit curvature.
  static QuadraticSpec scalars(std::initializer_list<double> centers);
  static QuadraticSpec scalars(std::span<const double> centers);
};

// Index groups for minibatched oracles; see group_minibatches() in dataset.hpp
// for the grouping rule itself.
using IndexGroups = std::vector<std::vector<int>>;

ProblemPtr make_quadratic(const QuadraticSpec& spec);
ProblemPtr make_quadratic(const QuadraticSpec& spec, const IndexGroups& groups);

// ---------------------------------------------------------------------------
// L2-regularized logistic regression. Per-sample loss for (a_i, b_i):
//   softplus(a_i^T x) - b_i * (a_i^T x) + (lambda/2) ||x||^2,
// i.e. cross-entropy of the sigmoid plus a regularizer replicated in every
// component. Gradient: (h(a_i^T x) - b_i) a_i + lambda x.
// ---------------------------------------------------------------------------

struct LogisticSpec {
  SparseMatrix features;       // N x d
  std::vector<double> labels;  // in {0, 1}
  double lambda = 0.0;
};

struct LogisticSmoothness {
  double L_f;    // ||A||^2 / (4N) + lambda
  double L_max;  // max_i ||a_i||^2 + lambda
};

// Spectral norm by power iteration (tolerance 1e-8, cap 1e4 iterations).
double spectral_norm(const SparseMatrix& A);
LogisticSmoothness logistic_smoothness(const SparseMatrix& A, double lambda);

ProblemPtr make_logistic(const LogisticSpec& spec);
ProblemPtr make_logistic(const LogisticSpec& spec, const IndexGroups& groups);
// Regrouping path: smoothness constants do not depend on the grouping, so
// callers that re-cut groups per epoch pass them in once.
ProblemPtr make_logistic(std::shared_ptr<const LogisticSpec> spec,
                         const IndexGroups& groups,
                         const LogisticSmoothness& smoothness);

// ---------------------------------------------------------------------------
// Generic oracle from callables, for problem families the library does not
// model directly. Constants must be supplied by the caller.
// ---------------------------------------------------------------------------

using ValueFn = std::function<double(int, const Vector&)>;
using GradientFn = std::function<Vector(int, const Vector&)>;

ProblemPtr make_generic(int n, int d, ValueFn value, GradientFn gradient,
                        ProblemConstants constants,
                        std::optional<std::vector<double>> infima = {});

// Bounded-variance nonconvex family: f_i(x) = (1/2)||x - b_i||^2 +
// cos(<1, x - b_i>). Smooth with L = 1 + d, nonconvex for d >= 2; for d = 1
// this is the scalar family (1/2)(x-b)^2 + cos(x-b).
ProblemPtr make_cosine_quadratic(const std::vector<Vector>& centers);

// The constants the oracle was built with (Assumption-1 style: L valid for f
// and for every component).
inline const ProblemConstants& smoothness_constants(const ProblemOracle& p) {
  return p.constants();
}

}  // namespace reshuffle

#endif
