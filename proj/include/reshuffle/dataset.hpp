#ifndef RESHUFFLE_DATASET_HPP
#define RESHUFFLE_DATASET_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reshuffle/sparse.hpp"

namespace reshuffle {

struct Dataset {
  SparseMatrix features;       // N x d
  std::vector<double> labels;  // normalized to {0, 1}

  int N() const { return features.rows; }
  int d() const { return features.cols; }
};

struct ParseError : std::runtime_error {
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;    // 1-based input line
  int column;  // 1-based token position within the line (0 = label)
};

// LIBSVM text: "<label> <idx>:<val> ..." with 1-based strictly increasing
// indices. Labels -1/+1 map to 0/1; 0/1 are kept; anything else is rejected.
// d defaults to the largest index seen and may be overridden upward.
Dataset parse_libsvm(std::istream& in, std::optional<int> dim_override = {});
Dataset parse_libsvm(const std::string& text,
                     std::optional<int> dim_override = {});

// Canonical text form; values at full precision so parse(serialize(ds))
// reproduces indices and values bit-for-bit.
std::string serialize_libsvm(const Dataset& ds);

struct MinibatchPartition {
  std::vector<std::vector<int>> groups;
  int tau = 1;
};

// Cuts ceil(N/tau) contiguous blocks from `ordering`: the first n-1 groups
// have size tau, the last takes the remaining N - tau*(ceil(N/tau) - 1).
MinibatchPartition group_minibatches(int N, int tau,
                                     std::span<const int> ordering);
MinibatchPartition group_minibatches(int N, int tau);  // identity ordering

// Minibatch smoothness estimate:
//   n(tau-1)/(tau(n-1)) L_f + (n-tau)/(tau(n-1)) L_max,  n = n_samples.
double batch_smoothness(double L_f, double L_max, int n_samples, int tau);

// lambda = L / sqrt(N)
double default_regularizer(double L, int N);

}  // namespace reshuffle

#endif
