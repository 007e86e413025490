#include "reshuffle/shuffle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reshuffle {

namespace {
// Stream salts so the RNG draws of different purposes never overlap.
constexpr std::uint64_t kRrSalt = 0x5252;      // per-epoch reshuffling
constexpr std::uint64_t kSoSalt = 0x534f;      // the single SO permutation
constexpr std::uint64_t kSgdSalt = 0x534744;   // SGD index draws
}  // namespace

bool is_permutation_of(std::span<const int> order, int n) {
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : order) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kRR: return "RR";
    case Method::kSO: return "SO";
    case Method::kIG: return "IG";
    case Method::kSgdIid: return "SGD-iid";
    case Method::kSgdWindow: return "SGD-window";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  if (name == "RR") return Method::kRR;
  if (name == "SO") return Method::kSO;
  if (name == "IG") return Method::kIG;
  if (name == "SGD-iid") return Method::kSgdIid;
  if (name == "SGD-window") return Method::kSgdWindow;
  return std::nullopt;
}

Permutation sample_permutation(SplitMix64& rng, int n) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.next_below(i + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

Permutation sample_permutation(std::uint64_t seed, int n) {
  SplitMix64 rng(seed);
  return sample_permutation(rng, n);
}

std::vector<int> epoch_ordering(const OrderingScheme& scheme, int n, int epoch,
                                std::uint64_t run_seed) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  switch (scheme.kind) {
    case Method::kRR: {
      SplitMix64 rng(derive_stream(run_seed, epoch, kRrSalt));
      return sample_permutation(rng, n);
    }
    case Method::kSO: {
      if (scheme.base) {
        if (!is_permutation_of(*scheme.base, n))
          throw std::invalid_argument("SO base is not a permutation of n");
        return *scheme.base;
      }
      SplitMix64 rng(derive_stream(run_seed, 0, kSoSalt));
      return sample_permutation(rng, n);
    }
    case Method::kIG: {
      if (scheme.base) {
        if (!is_permutation_of(*scheme.base, n))
          throw std::invalid_argument("IG base is not a permutation of n");
        return *scheme.base;
      }
      std::vector<int> id(n);
      std::iota(id.begin(), id.end(), 0);
      return id;
    }
    case Method::kSgdIid: {
      SplitMix64 rng(derive_stream(run_seed, epoch, kSgdSalt));
      std::vector<int> out(n);
      for (int& v : out) v = static_cast<int>(rng.next_below(n));
      return out;
    }
    case Method::kSgdWindow: {
      if (!scheme.window_tau || *scheme.window_tau < 1)
        throw std::invalid_argument("SGD-window requires window_tau >= 1");
      SplitMix64 rng(derive_stream(run_seed, epoch, kSgdSalt));
      std::vector<int> out;
      out.reserve(n);
      while (static_cast<int>(out.size()) < n) {
        const auto start = static_cast<int>(rng.next_below(n));
        for (int k = 0; k < *scheme.window_tau &&
                        static_cast<int>(out.size()) < n;
             ++k)
          out.push_back((start + k) % n);
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

WorStats wor_mean_and_variance(std::span<const Vector> X, int k) {
  const int n = static_cast<int>(X.size());
  if (n < 1) throw std::invalid_argument("need at least one vector");
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  WorStats out;
  out.mean = Vector::Zero(X.front().size());
  for (const Vector& x : X) out.mean += x;
  out.mean /= n;
  out.sigma_sq = 0.0;
  for (const Vector& x : X) out.sigma_sq += (x - out.mean).squaredNorm();
  out.sigma_sq /= n;
  // k = n samples the whole set, variance 0 (covers n = 1 without dividing).
  out.predicted_variance =
      k == n ? 0.0
             : static_cast<double>(n - k) / (static_cast<double>(k) * (n - 1)) *
                   out.sigma_sq;
  return out;
}

namespace {

// Enumerates all permutations with p[0] = first, calling fn on each. The
// remaining n-1 slots run through std::next_permutation in lexicographic
// order, so the visit order is fixed.
template <typename Fn>
void enumerate_with_leading(int n, int first, Fn&& fn) {
  Permutation p(n);
  p[0] = first;
  int pos = 1;
  for (int v = 0; v < n; ++v)
    if (v != first) p[pos++] = v;
  do {
    fn(const_cast<const Permutation&>(p));
  } while (std::next_permutation(p.begin() + 1, p.end()));
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<double> enumerate_permutation_accumulate(
    int n, std::size_t slots,
    const std::function<void(const Permutation&, std::span<double>)>& fn,
    int threads) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  if (n > kEnumerationCap)
    throw std::invalid_argument("enumeration capped at n <= " +
                                std::to_string(kEnumerationCap) + ", got n = " +
                                std::to_string(n));
  // One chunk per leading element; chunk-local sums are combined in chunk
  // order, so results do not depend on the thread count.
  std::vector<std::vector<double>> partial(n, std::vector<double>(slots, 0.0));
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) \
    if (threads > 1)
#endif
  for (int first = 0; first < n; ++first) {
    std::span<double> acc(partial[first]);
    enumerate_with_leading(n, first,
                           [&](const Permutation& p) { fn(p, acc); });
  }
  std::vector<double> total(slots, 0.0);
  for (int first = 0; first < n; ++first)
    for (std::size_t s = 0; s < slots; ++s) total[s] += partial[first][s];
  return total;
}

double enumerate_permutation_expectation(
    int n, const std::function<double(const Permutation&)>& fn, int threads) {
  auto sums = enumerate_permutation_accumulate(
      n, 1, [&](const Permutation& p, std::span<double> acc) { acc[0] += fn(p); },
      threads);
  return sums[0] / factorial(n);
}

double enumerate_permutation_expectation_serial(
    int n, const std::function<double(const Permutation&)>& fn) {
  return enumerate_permutation_expectation(n, fn, 1);
}

}  // namespace reshuffle
