#ifndef RESHUFFLE_SPARSE_HPP
#define RESHUFFLE_SPARSE_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace reshuffle {

using Vector = Eigen::VectorXd;

// One sparse sample row; column indices are 0-based and strictly increasing.
struct SparseRow {
  std::vector<int> idx;
  std::vector<double> val;

  double dot(const Vector& x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) s += val[k] * x[idx[k]];
    return s;
  }

  // y += c * row
  void add_scaled_to(double c, Vector& y) const {
    for (std::size_t k = 0; k < idx.size(); ++k) y[idx[k]] += c * val[k];
  }

  double squared_norm() const {
    double s = 0.0;
    for (double v : val) s += v * v;
    return s;
  }
};

struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<SparseRow> row;

  // y = A^T (A x), the operator used by power iteration for ||A||_2.
  Vector normal_product(const Vector& x) const {
    Vector y = Vector::Zero(cols);
    for (const SparseRow& r : row) r.add_scaled_to(r.dot(x), y);
    return y;
  }
};

}  // namespace reshuffle

#endif
