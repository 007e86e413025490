#include "reshuffle/problem.hpp"

#include <cmath>
#include <numeric>

namespace reshuffle {

bool convexity_at_least(ConvexityClass have, ConvexityClass need) {
  auto rank = [](ConvexityClass c) {
    switch (c) {
      case ConvexityClass::kEachStronglyConvex: return 3;
      case ConvexityClass::kFStronglyConvex: return 2;
      case ConvexityClass::kConvex: return 1;
      default: return 0;
    }
  };
  if (need == ConvexityClass::kNonConvex) return true;  // no structure needed
  if (need == ConvexityClass::kPolyakLojasiewicz)
    return have == ConvexityClass::kPolyakLojasiewicz ||
           rank(have) >= rank(ConvexityClass::kFStronglyConvex);
  if (have == ConvexityClass::kPolyakLojasiewicz ||
      have == ConvexityClass::kNonConvex)
    return false;
  return rank(have) >= rank(need);
}

void ProblemOracle::check_index(int i) const {
  if (i < 0 || i >= n_)
    throw std::out_of_range("component index " + std::to_string(i) +
                            " out of range [0, " + std::to_string(n_) + ")");
}

void ProblemOracle::check_dim(const Vector& x) const {
  if (x.size() != d_)
    throw std::invalid_argument("vector dimension " +
                                std::to_string(x.size()) + " != problem d = " +
                                std::to_string(d_));
}

double ProblemOracle::value(const Vector& x) const {
  check_dim(x);
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += component_value(i, x);
  return s / n_;
}

Vector ProblemOracle::gradient(const Vector& x) const {
  check_dim(x);
  Vector g = Vector::Zero(d_);
  for (int i = 0; i < n_; ++i) g += component_gradient(i, x);
  return g / n_;
}

// ---------------------------------------------------------------------------
// Quadratic
// ---------------------------------------------------------------------------

QuadraticSpec QuadraticSpec::scalars(std::initializer_list<double> centers) {
  std::vector<double> c(centers);
  return scalars(std::span<const double>(c));
}

QuadraticSpec QuadraticSpec::scalars(std::span<const double> centers) {
  QuadraticSpec spec;
  for (double c : centers) {
    Vector v(1);
    v[0] = c;
    spec.centers.push_back(v);
    spec.curvatures.push_back(1.0);
  }
  return spec;
}

namespace {

class QuadraticProblem final : public ProblemOracle {
 public:
  QuadraticProblem(QuadraticSpec spec, IndexGroups groups,
                   ProblemConstants constants, int d)
      : ProblemOracle(static_cast<int>(groups.size()), d, constants),
        spec_(std::move(spec)),
        groups_(std::move(groups)) {
    std::vector<double> infima(groups_.size());
    for (std::size_t g = 0; g < groups_.size(); ++g)
      infima[g] = component_value(static_cast<int>(g), group_minimizer(g));
    infima_ = std::move(infima);
  }

  double component_value(int i, const Vector& x) const override {
    check_index(i);
    check_dim(x);
    double s = 0.0;
    for (int j : groups_[i])
      s += 0.5 * spec_.curvatures[j] * (x - spec_.centers[j]).squaredNorm();
    return s / static_cast<double>(groups_[i].size());
  }

  Vector component_gradient(int i, const Vector& x) const override {
    check_index(i);
    check_dim(x);
    Vector g = Vector::Zero(d_);
    for (int j : groups_[i]) g += spec_.curvatures[j] * (x - spec_.centers[j]);
    return g / static_cast<double>(groups_[i].size());
  }

  std::optional<Vector> closed_form_minimizer() const override {
    // zero of (1/n) sum_g (1/|g|) sum_j a_j (x - b_j): the curvature-weighted
    // mean with per-sample weight a_j / |group(j)|.
    Vector num = Vector::Zero(d_);
    double den = 0.0;
    for (const auto& group : groups_) {
      const double w = 1.0 / static_cast<double>(group.size());
      for (int j : group) {
        num += w * spec_.curvatures[j] * spec_.centers[j];
        den += w * spec_.curvatures[j];
      }
    }
    return Vector(num / den);
  }

 private:
  Vector group_minimizer(std::size_t g) const {
    Vector num = Vector::Zero(d_);
    double den = 0.0;
    for (int j : groups_[g]) {
      num += spec_.curvatures[j] * spec_.centers[j];
      den += spec_.curvatures[j];
    }
    return num / den;
  }

  QuadraticSpec spec_;
  IndexGroups groups_;
};

IndexGroups singleton_groups(int n) {
  IndexGroups groups(n);
  for (int i = 0; i < n; ++i) groups[i] = {i};
  return groups;
}

void validate_quadratic(const QuadraticSpec& spec) {
  if (spec.centers.empty())
    throw std::invalid_argument("quadratic spec has no centers");
  if (spec.curvatures.size() != spec.centers.size())
    throw std::invalid_argument("curvature count does not match center count");
  const auto d = spec.centers.front().size();
  for (const Vector& c : spec.centers)
    if (c.size() != d)
      throw std::invalid_argument("quadratic centers have mixed dimensions");
  for (double a : spec.curvatures)
    if (!(a > 0.0)) throw std::invalid_argument("curvatures must be positive");
}

void validate_groups(const IndexGroups& groups, int n) {
  std::vector<char> seen(n, 0);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("empty minibatch group");
    for (int j : g) {
      if (j < 0 || j >= n || seen[j])
        throw std::invalid_argument("groups must partition the sample set");
      seen[j] = 1;
    }
  }
  for (char s : seen)
    if (!s) throw std::invalid_argument("groups must cover every sample");
}

}  // namespace

ProblemPtr make_quadratic(const QuadraticSpec& spec) {
  return make_quadratic(spec, singleton_groups(static_cast<int>(spec.centers.size())));
}

ProblemPtr make_quadratic(const QuadraticSpec& spec, const IndexGroups& groups) {
  validate_quadratic(spec);
  validate_groups(groups, static_cast<int>(spec.centers.size()));
  ProblemConstants constants;
  // Every component Hessian is a convex combination of a_j I within a group,
  // so max/min over samples bound all components and f itself.
  constants.L = *std::max_element(spec.curvatures.begin(), spec.curvatures.end());
  constants.mu = *std::min_element(spec.curvatures.begin(), spec.curvatures.end());
  constants.convexity = ConvexityClass::kEachStronglyConvex;
  constants.pl_mu = constants.mu;
  return std::make_shared<QuadraticProblem>(
      spec, groups, constants, static_cast<int>(spec.centers.front().size()));
}

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

double spectral_norm(const SparseMatrix& A) {
  if (A.rows == 0 || A.cols == 0) return 0.0;
  constexpr double kTol = 1e-8;
  constexpr int kMaxIter = 10000;
  // Deterministic start with energy in every coordinate.
  Vector v = Vector::Constant(A.cols, 1.0 / std::sqrt(double(A.cols)));
  double lambda = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    Vector w = A.normal_product(v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = w.dot(A.normal_product(w));
    if (std::abs(next - lambda) <= kTol * std::max(1.0, next))
      return std::sqrt(next);
    lambda = next;
    v = std::move(w);
  }
  throw std::runtime_error("spectral_norm: power iteration cap exceeded");
}

LogisticSmoothness logistic_smoothness(const SparseMatrix& A, double lambda) {
  LogisticSmoothness s;
  const double op = spectral_norm(A);
  s.L_f = op * op / (4.0 * A.rows) + lambda;
  double max_sq = 0.0;
  for (const SparseRow& r : A.row) max_sq = std::max(max_sq, r.squared_norm());
  s.L_max = max_sq + lambda;
  return s;
}

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

class LogisticProblem final : public ProblemOracle {
 public:
  LogisticProblem(std::shared_ptr<const LogisticSpec> spec, IndexGroups groups,
                  ProblemConstants constants)
      : ProblemOracle(static_cast<int>(groups.size()), spec->features.cols,
                      constants),
        spec_(std::move(spec)),
        groups_(std::move(groups)) {}

  double component_value(int i, const Vector& x) const override {
    check_index(i);
    check_dim(x);
    double s = 0.0;
    for (int j : groups_[i]) {
      const double t = spec_->features.row[j].dot(x);
      s += softplus(t) - spec_->labels[j] * t;
    }
    s /= static_cast<double>(groups_[i].size());
    return s + 0.5 * spec_->lambda * x.squaredNorm();
  }

  Vector component_gradient(int i, const Vector& x) const override {
    check_index(i);
    check_dim(x);
    Vector g = spec_->lambda * x;
    const double inv = 1.0 / static_cast<double>(groups_[i].size());
    for (int j : groups_[i]) {
      const double t = spec_->features.row[j].dot(x);
      spec_->features.row[j].add_scaled_to(inv * (sigmoid(t) - spec_->labels[j]),
                                           g);
    }
    return g;
  }

 private:
  std::shared_ptr<const LogisticSpec> spec_;
  IndexGroups groups_;
};

void validate_logistic(const LogisticSpec& spec) {
  if (spec.features.row.empty())
    throw std::invalid_argument("logistic spec has no samples");
  if (spec.labels.size() != spec.features.row.size())
    throw std::invalid_argument("label count does not match sample count");
  if (spec.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  for (double b : spec.labels)
    if (b != 0.0 && b != 1.0)
      throw std::invalid_argument("labels must lie in {0, 1}");
  for (const SparseRow& r : spec.features.row)
    for (int k : r.idx)
      if (k < 0 || k >= spec.features.cols)
        throw std::invalid_argument("feature index exceeds declared dimension");
}

}  // namespace

ProblemPtr make_logistic(const LogisticSpec& spec) {
  return make_logistic(spec,
                       singleton_groups(static_cast<int>(spec.labels.size())));
}

ProblemPtr make_logistic(const LogisticSpec& spec, const IndexGroups& groups) {
  return make_logistic(std::make_shared<const LogisticSpec>(spec), groups,
                       logistic_smoothness(spec.features, spec.lambda));
}

ProblemPtr make_logistic(std::shared_ptr<const LogisticSpec> spec,
                         const IndexGroups& groups,
                         const LogisticSmoothness& s) {
  validate_logistic(*spec);
  validate_groups(groups, static_cast<int>(spec->labels.size()));
  ProblemConstants constants;
  constants.L = s.L_max;  // valid for f and for every minibatch component
  constants.mu = spec->lambda;
  constants.convexity = spec->lambda > 0.0 ? ConvexityClass::kEachStronglyConvex
                                           : ConvexityClass::kConvex;
  if (spec->lambda > 0.0) constants.pl_mu = spec->lambda;
  return std::make_shared<LogisticProblem>(std::move(spec), groups, constants);
}

// ---------------------------------------------------------------------------
// Generic + cosine family
// ---------------------------------------------------------------------------

namespace {

class GenericProblem final : public ProblemOracle {
 public:
  GenericProblem(int n, int d, ValueFn value, GradientFn gradient,
                 ProblemConstants constants,
                 std::optional<std::vector<double>> infima)
      : ProblemOracle(n, d, constants),
        value_(std::move(value)),
        gradient_(std::move(gradient)) {
    infima_ = std::move(infima);
  }

  double component_value(int i, const Vector& x) const override {
    check_index(i);
    check_dim(x);
    return value_(i, x);
  }

  Vector component_gradient(int i, const Vector& x) const override {
    check_index(i);
    check_dim(x);
    return gradient_(i, x);
  }

 private:
  ValueFn value_;
  GradientFn gradient_;
};

}  // namespace

ProblemPtr make_generic(int n, int d, ValueFn value, GradientFn gradient,
                        ProblemConstants constants,
                        std::optional<std::vector<double>> infima) {
  if (n < 1 || d < 1) throw std::invalid_argument("need n >= 1 and d >= 1");
  return std::make_shared<GenericProblem>(n, d, std::move(value),
                                          std::move(gradient), constants,
                                          std::move(infima));
}

ProblemPtr make_cosine_quadratic(const std::vector<Vector>& centers) {
  if (centers.empty()) throw std::invalid_argument("no centers");
  const int d = static_cast<int>(centers.front().size());
  const int n = static_cast<int>(centers.size());
  for (const Vector& c : centers)
    if (c.size() != d) throw std::invalid_argument("mixed center dimensions");
  ProblemConstants constants;
  constants.L = 1.0 + d;  // Hessian I - cos(<1,x-b>) 11^T
  constants.convexity = ConvexityClass::kNonConvex;
  auto value = [centers](int i, const Vector& x) {
    const Vector diff = x - centers[i];
    return 0.5 * diff.squaredNorm() + std::cos(diff.sum());
  };
  auto gradient = [centers](int i, const Vector& x) {
    const Vector diff = x - centers[i];
    return Vector(diff - Vector::Constant(diff.size(), std::sin(diff.sum())));
  };
  return make_generic(n, d, value, gradient, constants);
}

}  // namespace reshuffle
