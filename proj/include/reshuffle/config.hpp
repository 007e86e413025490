#ifndef RESHUFFLE_CONFIG_HPP
#define RESHUFFLE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reshuffle/analysis.hpp"
#include "reshuffle/problem.hpp"
#include "reshuffle/shuffle.hpp"

namespace reshuffle {

// One experiment description, parsed from a key = value document. Unknown
// keys are errors.
struct ExperimentConfig {
  enum class Mode { kTrajectories, kVarianceSweep, kBoundCheck };
  enum class ProblemKind { kQuadratic, kQuadraticRandom, kCosine, kLibsvm };

  Mode mode = Mode::kTrajectories;

  // Problem source.
  ProblemKind problem = ProblemKind::kQuadratic;
  std::vector<Vector> centers;
  std::vector<double> curvatures;  // empty = all 1
  int random_N = 0;                // quadratic-random sample count
  int random_dim = 1;
  std::uint64_t problem_seed = 1;
  double center_scale = 1.0;
  std::string libsvm_path;
  std::optional<int> dim_override;
  std::optional<double> lambda;    // absent = L/sqrt(N) default
  int tau = 0;                     // 0 = no minibatch grouping
  std::string base_ordering = "file";  // or "shuffle:<seed>"

  // Run parameters.
  std::vector<Method> methods;
  bool constant_schedule = true;
  double gamma = 0.1;
  double c_rr = 3.0, c_sgd = 2.0;  // capped-inverse numerators
  std::optional<long> k0;          // absent = floor(K/40)
  int sgd_window = 0;              // 0 = component count
  int epochs = 30;
  std::vector<std::uint64_t> seeds;
  std::vector<double> x0;          // empty = zeros
  bool record_inner = false;
  int record_every = 1;
  int threads = 0;

  // Bound-check mode.
  std::vector<TheoremId> theorems;
  double slack = 0.0;
  long num_perms = 0;  // 0 = exact enumeration
  std::uint64_t mc_seed = 1;

  std::string out_dir = "out";  // default output directory (--out overrides)

  // Variance-sweep mode.
  std::vector<int> tau_grid;
  std::vector<double> gamma_grid;
  double sweep_gamma = 0.0;  // gamma for the tau sweep; 0 = 1/(2L)
  int sweep_tau = 0;         // tau for the gamma sweep; 0 = skip
  long dist_samples = 0;     // per-permutation distribution sample count
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// "a..b" (inclusive) or comma-separated values.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

}  // namespace reshuffle

#endif
