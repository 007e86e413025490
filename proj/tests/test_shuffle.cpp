#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "reshuffle/shuffle.hpp"

using namespace reshuffle;

namespace {

Vector scalar(double v) {
  Vector x(1);
  x[0] = v;
  return x;
}

std::vector<Vector> scalars(std::initializer_list<double> vs) {
  std::vector<Vector> out;
  for (double v : vs) out.push_back(scalar(v));
  return out;
}

// Mean of the first k entries of X under permutation pi, squared deviation
// from the full mean. The enumerated expectation of this is the Lemma-1
// oracle.
double first_k_sq_deviation(std::span<const Vector> X, const Permutation& pi,
                            int k) {
  Vector mean_all = Vector::Zero(X.front().size());
  for (const Vector& x : X) mean_all += x;
  mean_all /= static_cast<double>(X.size());
  Vector mean_k = Vector::Zero(X.front().size());
  for (int i = 0; i < k; ++i) mean_k += X[pi[i]];
  mean_k /= k;
  return (mean_k - mean_all).squaredNorm();
}

}  // namespace

TEST_CASE("permutation sampling basics") {
  SplitMix64 rng(1);
  CHECK(sample_permutation(rng, 1) == Permutation{0});
  // determinism: same seed, same permutation
  CHECK(sample_permutation(42, 9) == sample_permutation(42, 9));
  CHECK(is_permutation_of(sample_permutation(7, 20), 20));
}

TEST_CASE("permutations are uniform: 60000 draws over n = 3") {
  const int kDraws = 60000;
  SplitMix64 rng(2024);
  std::map<Permutation, int> counts;
  for (int i = 0; i < kDraws; ++i) counts[sample_permutation(rng, 3)]++;
  REQUIRE(counts.size() == 6);
  // each cell within 3 standard errors of 1/6
  const double p = 1.0 / 6.0;
  const double se = std::sqrt(p * (1 - p) / kDraws);
  for (const auto& [perm, count] : counts) {
    const double freq = static_cast<double>(count) / kDraws;
    CHECK(std::abs(freq - p) <= 3.0 * se);
  }
}

TEST_CASE("epoch orderings per method") {
  const auto so = OrderingScheme::so(Permutation{2, 0, 1});
  for (int t : {0, 1, 5, 99})
    CHECK(epoch_ordering(so, 3, t, 7) == std::vector<int>{2, 0, 1});

  const auto ig = OrderingScheme::ig();
  for (int t : {0, 3})
    CHECK(epoch_ordering(ig, 4, t, 7) == std::vector<int>{0, 1, 2, 3});

  // SO without an explicit base draws one permutation per run seed
  const auto so_auto = OrderingScheme::so();
  const auto base = epoch_ordering(so_auto, 6, 0, 11);
  CHECK(is_permutation_of(base, 6));
  for (int t : {1, 2, 17}) CHECK(epoch_ordering(so_auto, 6, t, 11) == base);

  // RR produces a valid permutation every epoch
  const auto rr = OrderingScheme::rr();
  for (int t = 0; t < 50; ++t)
    CHECK(is_permutation_of(epoch_ordering(rr, 6, t, 11), 6));

  // missing base is only an issue for SO with a wrong-length base
  CHECK_THROWS_AS(
      epoch_ordering(OrderingScheme::so(Permutation{0, 1}), 3, 0, 1),
      std::invalid_argument);
}

TEST_CASE("RR epochs collide at roughly rate 1/n!") {
  // n = 4: collision probability 1/24 per epoch pair
  const auto rr = OrderingScheme::rr();
  const int kPairs = 6000;
  int collisions = 0;
  for (int i = 0; i < kPairs; ++i) {
    const auto a = epoch_ordering(rr, 4, 2 * i, 99);
    const auto b = epoch_ordering(rr, 4, 2 * i + 1, 99);
    if (a == b) ++collisions;
  }
  const double rate = static_cast<double>(collisions) / kPairs;
  const double expect = 1.0 / 24.0;
  const double se = std::sqrt(expect * (1 - expect) / kPairs);
  CHECK(std::abs(rate - expect) <= 4.0 * se);
}

TEST_CASE("SGD orderings") {
  const auto iid = OrderingScheme::sgd_iid();
  const auto draws = epoch_ordering(iid, 5, 0, 3);
  CHECK(draws.size() == 5);
  for (int v : draws) CHECK((v >= 0 && v < 5));
  // determinism per (seed, epoch)
  CHECK(epoch_ordering(iid, 5, 0, 3) == draws);
  CHECK(epoch_ordering(iid, 5, 1, 3) != draws);

  const auto window = OrderingScheme::sgd_window(8);
  const auto w = epoch_ordering(window, 8, 0, 3);
  REQUIRE(w.size() == 8);
  for (std::size_t i = 1; i < w.size(); ++i)
    CHECK(w[i] == (w[i - 1] + 1) % 8);

  // window shorter than the epoch: consecutive runs of that length
  const auto w3 = epoch_ordering(OrderingScheme::sgd_window(3), 9, 0, 3);
  REQUIRE(w3.size() == 9);
  for (std::size_t i = 0; i < w3.size(); ++i)
    if (i % 3 != 0) CHECK(w3[i] == (w3[i - 1] + 1) % 9);
}

TEST_CASE("sampling without replacement: examples") {
  const auto X = scalars({0.0, 3.0, 6.0});
  const WorStats k2 = wor_mean_and_variance(X, 2);
  CHECK(k2.sigma_sq == doctest::Approx(6.0));
  CHECK(k2.predicted_variance == doctest::Approx(1.5));
  CHECK(k2.mean[0] == doctest::Approx(3.0));

  CHECK(wor_mean_and_variance(X, 3).predicted_variance == 0.0);
  CHECK(wor_mean_and_variance(X, 1).predicted_variance ==
        doctest::Approx(6.0));
  CHECK_THROWS_AS(wor_mean_and_variance(X, 0), std::invalid_argument);
  CHECK_THROWS_AS(wor_mean_and_variance(X, 4), std::invalid_argument);
}

TEST_CASE("enumeration oracle basics") {
  CHECK(enumerate_permutation_expectation(
            5, [](const Permutation&) { return 2.5; }) == doctest::Approx(2.5));
  CHECK(enumerate_permutation_expectation(2, [](const Permutation& p) {
          return p[0] == 0 && p[1] == 1 ? 1.0 : 0.0;
        }) == doctest::Approx(0.5));
  const auto X = scalars({0.0, 3.0, 6.0});
  CHECK(enumerate_permutation_expectation(
            3,
            [&](const Permutation& p) { return first_k_sq_deviation(X, p, 2); }) ==
        doctest::Approx(1.5).epsilon(1e-14));
  CHECK_THROWS_AS(
      enumerate_permutation_expectation(9, [](const Permutation&) { return 0.0; }),
      std::invalid_argument);
}

TEST_CASE("Lemma-1 identities by enumeration, n <= 6") {
  SplitMix64 rng(31);
  for (int n = 2; n <= 6; ++n) {
    std::vector<Vector> X;
    for (int i = 0; i < n; ++i) {
      Vector v(2);
      v[0] = 4.0 * rng.next_unit() - 2.0;
      v[1] = 4.0 * rng.next_unit() - 2.0;
      X.push_back(v);
    }
    Vector mean = Vector::Zero(2);
    for (const Vector& x : X) mean += x;
    mean /= n;

    for (int k = 1; k <= n; ++k) {
      // variance formula
      const double predicted = wor_mean_and_variance(X, k).predicted_variance;
      const double enumerated = enumerate_permutation_expectation(
          n, [&](const Permutation& p) { return first_k_sq_deviation(X, p, k); });
      CHECK(std::abs(predicted - enumerated) <= 1e-10);

      // sample-mean unbiasedness, coordinate 0
      const double mean0 = enumerate_permutation_expectation(
          n, [&](const Permutation& p) {
            double s = 0.0;
            for (int i = 0; i < k; ++i) s += X[p[i]][0];
            return s / k;
          });
      CHECK(mean0 == doctest::Approx(mean[0]).epsilon(1e-12));
    }

    // covariance identity cov(X_pi_i, X_pi_j) = -sigma^2/(n-1), i != j
    double sigma_sq = 0.0;
    for (const Vector& x : X) sigma_sq += (x - mean).squaredNorm();
    sigma_sq /= n;
    const double cov = enumerate_permutation_expectation(
        n, [&](const Permutation& p) {
          return (X[p[0]] - mean).dot(X[p[1]] - mean);
        });
    CHECK(cov == doctest::Approx(-sigma_sq / (n - 1)).epsilon(1e-10));
  }
}

TEST_CASE("parallel enumeration equals the serial reference bit-for-bit") {
  auto fn = [](const Permutation& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::sin(p[i] * (i + 1.0));
    return s;
  };
  for (int n : {3, 6, 8}) {
    const double serial = enumerate_permutation_expectation_serial(n, fn);
    const double parallel = enumerate_permutation_expectation(n, fn, 4);
    CHECK(serial == parallel);
  }
}
