#ifndef RESHUFFLE_SHUFFLE_HPP
#define RESHUFFLE_SHUFFLE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reshuffle/rng.hpp"
#include "reshuffle/sparse.hpp"

namespace reshuffle {

using Permutation = std::vector<int>;

bool is_permutation_of(std::span<const int> order, int n);

enum class Method { kRR, kSO, kIG, kSgdIid, kSgdWindow };

std::string method_name(Method m);                    // "RR", "SO", ...
std::optional<Method> method_from_name(std::string_view name);

struct OrderingScheme {
  Method kind = Method::kRR;
  std::optional<Permutation> base;  // SO / IG; IG defaults to 0..n-1
  std::optional<int> window_tau;    // SGD-window run length

  static OrderingScheme rr() { return {Method::kRR, {}, {}}; }
  static OrderingScheme so(std::optional<Permutation> base = {}) {
    return {Method::kSO, std::move(base), {}};
  }
  static OrderingScheme ig(std::optional<Permutation> base = {}) {
    return {Method::kIG, std::move(base), {}};
  }
  static OrderingScheme sgd_iid() { return {Method::kSgdIid, {}, {}}; }
  static OrderingScheme sgd_window(int tau) {
    return {Method::kSgdWindow, {}, tau};
  }
};

// Uniform permutation of {0,...,n-1} by Fisher-Yates over the given stream.
Permutation sample_permutation(SplitMix64& rng, int n);
Permutation sample_permutation(std::uint64_t seed, int n);

// Index sequence for epoch t of a run with the given seed:
//   RR         fresh uniform permutation each epoch
//   SO         one permutation drawn from the run seed, reused every epoch
//   IG         the base permutation (default 0..n-1) every epoch
//   SGD-iid    n independent uniform draws with replacement
//   SGD-window uniform start index, then consecutive indices mod n; a fresh
//              start every window_tau steps
std::vector<int> epoch_ordering(const OrderingScheme& scheme, int n, int epoch,
                                std::uint64_t run_seed);

// Sampling without replacement: draw k of the n vectors uniformly, average
// them. Predicted variance of that average is (n-k)/(k(n-1)) sigma^2.
struct WorStats {
  double predicted_variance;
  Vector mean;      // population mean
  double sigma_sq;  // population variance (1/n) sum ||X_i - mean||^2
};
WorStats wor_mean_and_variance(std::span<const Vector> X, int k);

// Exact mean of `fn` over all n! permutations, n <= 8. The factorial space is
// split into chunks by leading element; chunk sums are reduced in fixed order
// so the parallel and serial versions return identical bits.
double enumerate_permutation_expectation(
    int n, const std::function<double(const Permutation&)>& fn,
    int threads = 0);
double enumerate_permutation_expectation_serial(
    int n, const std::function<double(const Permutation&)>& fn);

// Vector-valued variant used by the variance estimators: fn accumulates one
// contribution per output slot.
std::vector<double> enumerate_permutation_accumulate(
    int n, std::size_t slots,
    const std::function<void(const Permutation&, std::span<double>)>& fn,
    int threads = 0);

inline constexpr int kEnumerationCap = 8;  // 8! = 40320 permutations

}  // namespace reshuffle

#endif
