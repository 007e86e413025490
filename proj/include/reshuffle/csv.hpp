#ifndef RESHUFFLE_CSV_HPP
#define RESHUFFLE_CSV_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reshuffle/runner.hpp"

namespace reshuffle {

// Full-precision decimal form of a double; parses back to the same bits.
std::string format_double(double v);

// Fixed trajectory schema:
//   method,seed,epoch,inner_step,global_step,gamma,f_value,dist_sq,grad_norm_sq
// Missing metrics are emitted as empty fields.
struct CsvRow {
  std::string method;
  std::uint64_t seed = 0;
  long epoch = 0;
  std::optional<long> inner_step;  // 1..n within the epoch; empty = boundary
  long global_step = 0;
  double gamma = 0.0;
  std::optional<double> f_value;
  std::optional<double> dist_sq;
  std::optional<double> grad_norm_sq;
};

extern const char* const kTrajectoryHeader;

std::vector<CsvRow> trajectory_rows(const Trajectory& traj,
                                    const ProblemOracle& problem,
                                    const Reference& ref);
void write_trajectory_csv(std::ostream& out, std::span<const CsvRow> rows);
std::vector<CsvRow> parse_trajectory_csv(std::istream& in);

// Per-epoch ensemble summary (means and 95% CIs across seeds):
//   method,epoch,f_mean,f_ci,dist_mean,dist_ci,grad_mean,grad_ci
struct SummaryRow {
  std::string method;
  long epoch = 0;
  std::optional<double> f_mean, f_ci;
  std::optional<double> dist_mean, dist_ci;
  std::optional<double> grad_mean, grad_ci;
};

extern const char* const kSummaryHeader;

std::vector<SummaryRow> summarize_ensemble(std::span<const Trajectory> runs);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
std::vector<SummaryRow> parse_summary_csv(std::istream& in);

}  // namespace reshuffle

#endif
