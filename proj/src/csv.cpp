#include "reshuffle/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "reshuffle/stats.hpp"

namespace reshuffle {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* const kTrajectoryHeader =
    "method,seed,epoch,inner_step,global_step,gamma,f_value,dist_sq,"
    "grad_norm_sq";
const char* const kSummaryHeader =
    "method,epoch,f_mean,f_ci,dist_mean,dist_ci,grad_mean,grad_ci";

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double to_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("bad CSV number '" + s + "'");
  return v;
}

std::optional<double> to_opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return to_double(s);
}

long to_long(const std::string& s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("bad CSV integer '" + s + "'");
  return v;
}

}  // namespace

std::vector<CsvRow> trajectory_rows(const Trajectory& traj,
                                    const ProblemOracle& problem,
                                    const Reference& ref) {
  std::vector<CsvRow> rows;
  const std::string name = method_name(traj.method);
  const int n = problem.num_components();
  const int T = static_cast<int>(traj.epoch_metrics.size()) - 1;
  for (int t = 0; t <= T; ++t) {
    CsvRow row;
    row.method = name;
    row.seed = traj.seed;
    row.epoch = t;
    row.global_step = static_cast<long>(t) * n;
    row.gamma = traj.gamma_at(row.global_step);
    const PointMetrics& m = traj.epoch_metrics[t];
    row.f_value = m.f_value;
    row.grad_norm_sq = m.grad_norm_sq;
    row.dist_sq = m.dist_sq;
    rows.push_back(std::move(row));

    if (t < static_cast<int>(traj.inner_iterates.size())) {
      const auto& inner = traj.inner_iterates[t];
      for (std::size_t j = 0; j < inner.size(); ++j) {
        CsvRow in;
        in.method = name;
        in.seed = traj.seed;
        in.epoch = t;
        // Recorded iterates sit at stride inner_stride; the last one is x_t^n.
        long step = (static_cast<long>(j) + 1) * traj.inner_stride;
        if (j + 1 == inner.size()) step = n;
        in.inner_step = step;
        in.global_step = static_cast<long>(t) * n + step;
        in.gamma = traj.gamma_at(in.global_step - 1);
        in.f_value = problem.value(inner[j]);
        if (ref.x_star) in.dist_sq = (inner[j] - *ref.x_star).squaredNorm();
        rows.push_back(std::move(in));
      }
    }
  }
  return rows;
}

void write_trajectory_csv(std::ostream& out, std::span<const CsvRow> rows) {
  out << kTrajectoryHeader << '\n';
  for (const CsvRow& r : rows) {
    out << r.method << ',' << r.seed << ',' << r.epoch << ','
        << (r.inner_step ? std::to_string(*r.inner_step) : std::string())
        << ',' << r.global_step << ',' << format_double(r.gamma) << ','
        << opt_field(r.f_value) << ',' << opt_field(r.dist_sq) << ','
        << opt_field(r.grad_norm_sq) << '\n';
  }
}

std::vector<CsvRow> parse_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw std::runtime_error("trajectory CSV: bad or missing header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9)
      throw std::runtime_error("trajectory CSV: expected 9 fields");
    CsvRow r;
    r.method = f[0];
    r.seed = static_cast<std::uint64_t>(to_long(f[1]));
    r.epoch = to_long(f[2]);
    if (!f[3].empty()) r.inner_step = to_long(f[3]);
    r.global_step = to_long(f[4]);
    r.gamma = to_double(f[5]);
    r.f_value = to_opt_double(f[6]);
    r.dist_sq = to_opt_double(f[7]);
    r.grad_norm_sq = to_opt_double(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SummaryRow> summarize_ensemble(std::span<const Trajectory> runs) {
  if (runs.empty()) return {};
  const std::string name = method_name(runs.front().method);
  std::size_t T1 = runs.front().epoch_metrics.size();
  for (const Trajectory& t : runs) T1 = std::min(T1, t.epoch_metrics.size());
  std::vector<SummaryRow> out;
  std::vector<double> f(runs.size()), d(runs.size()), g(runs.size());
  const bool has_dist =
      runs.front().epoch_metrics.front().dist_sq.has_value();
  for (std::size_t t = 0; t < T1; ++t) {
    SummaryRow row;
    row.method = name;
    row.epoch = static_cast<long>(t);
    for (std::size_t s = 0; s < runs.size(); ++s) {
      f[s] = runs[s].epoch_metrics[t].f_value;
      g[s] = runs[s].epoch_metrics[t].grad_norm_sq;
      if (has_dist) d[s] = *runs[s].epoch_metrics[t].dist_sq;
    }
    const MeanCI mf = mean_ci(f), mg = mean_ci(g);
    row.f_mean = mf.mean;
    row.f_ci = mf.ci_halfwidth;
    row.grad_mean = mg.mean;
    row.grad_ci = mg.ci_halfwidth;
    if (has_dist) {
      const MeanCI md = mean_ci(d);
      row.dist_mean = md.mean;
      row.dist_ci = md.ci_halfwidth;
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << r.method << ',' << r.epoch << ',' << opt_field(r.f_mean) << ','
        << opt_field(r.f_ci) << ',' << opt_field(r.dist_mean) << ','
        << opt_field(r.dist_ci) << ',' << opt_field(r.grad_mean) << ','
        << opt_field(r.grad_ci) << '\n';
  }
}

std::vector<SummaryRow> parse_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader)
    throw std::runtime_error("summary CSV: bad or missing header");
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8)
      throw std::runtime_error("summary CSV: expected 8 fields");
    SummaryRow r;
    r.method = f[0];
    r.epoch = to_long(f[1]);
    r.f_mean = to_opt_double(f[2]);
    r.f_ci = to_opt_double(f[3]);
    r.dist_mean = to_opt_double(f[4]);
    r.dist_ci = to_opt_double(f[5]);
    r.grad_mean = to_opt_double(f[6]);
    r.grad_ci = to_opt_double(f[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace reshuffle
