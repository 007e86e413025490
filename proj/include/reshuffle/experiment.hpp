#ifndef RESHUFFLE_EXPERIMENT_HPP
#define RESHUFFLE_EXPERIMENT_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "reshuffle/config.hpp"
#include "reshuffle/csv.hpp"
#include "reshuffle/dataset.hpp"

namespace reshuffle {

struct ExperimentResult {
  int exit_code = 0;
  std::vector<std::string> log;
  std::vector<std::filesystem::path> files;
};

// A problem assembled from a config: the finite sum the methods run on, plus
// (for dataset-backed problems) the sample-level view used by the appendix
// protocols (per-epoch regrouping for RR, sample-level SGD minibatching).
struct BuiltProblem {
  ProblemPtr oracle;
  ProblemPtr samples;  // null for synthetic component-level problems
  std::function<ProblemPtr(const MinibatchPartition&)> regroup;
  int N = 0;
  Reference ref;  // x*/f* for convex problems
};

BuiltProblem build_problem(const ExperimentConfig& cfg);

// Runs one (method, seed) cell under the dataset protocol: RR re-permutes the
// samples and re-cuts minibatch groups every epoch, SO/IG group once, SGD
// draws sample-level minibatches. Metrics always use the identity grouping so
// every cell reports the same objective.
Trajectory run_protocol(Method method, const BuiltProblem& bp, int tau,
                        const StepSchedule& schedule, int epochs,
                        std::uint64_t seed, bool record_inner,
                        int record_every, const Vector& x0 = {});

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir);

// Variance-sweep rows (also written as CSV by run_experiment).
struct SweepRow {
  int tau = 0;
  double gamma = 0.0;
  int n_components = 0;
  double sigma_star_sq = 0.0;
  double sigma_shuffle_sq = 0.0;
  double ci_halfwidth = 0.0;
  long num_permutations = 0;
  bool exact = false;
  double prop1_lower = 0.0;
  double prop1_upper = 0.0;
};

std::vector<SweepRow> variance_sweep(const ExperimentConfig& cfg);

extern const char* const kSweepHeader;
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

extern const char* const kCheckHeader;
struct CheckRow {
  std::string theorem;
  std::string method;
  double gamma = 0.0;
  int epochs = 0;
  std::size_t seeds = 0;
  std::optional<double> observed, rhs, ci_halfwidth;
  double slack = 0.0;
  bool pass = false;
  std::string note;
};
void write_check_csv(std::ostream& out, std::span<const CheckRow> rows);

}  // namespace reshuffle

#endif
