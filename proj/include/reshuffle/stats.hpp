#ifndef RESHUFFLE_STATS_HPP
#define RESHUFFLE_STATS_HPP

#include <cmath>
#include <cstddef>
#include <span>

namespace reshuffle {

inline constexpr double kZ95 = 1.959963984540054;

struct MeanCI {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal half-width; 0 for a single sample
  std::size_t count = 0;
};

inline MeanCI mean_ci(std::span<const double> xs, double z = kZ95) {
  MeanCI out;
  out.count = xs.size();
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - out.mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(xs.size() - 1);
  out.ci_halfwidth = z * std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace reshuffle

#endif
