// Command-line front end: run / sweep / check / plot.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "reshuffle/experiment.hpp"
#include "reshuffle/svg.hpp"

using namespace reshuffle;

namespace {

int env_threads() {
  if (const char* v = std::getenv("RESHUFFLE_THREADS")) {
    try {
      return std::stoi(v);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed RESHUFFLE_THREADS\n";
    }
  }
  return 0;
}

int run_config_mode(const std::string& config_path, const std::string& out,
                    const std::string& seeds, int threads,
                    ExperimentConfig::Mode expected, const char* verb) {
  ExperimentConfig cfg = parse_config_file(config_path);
  if (cfg.mode != expected) {
    std::cerr << "error: config mode does not match subcommand '" << verb
              << "'\n";
    return 2;
  }
  if (!seeds.empty()) cfg.seeds = parse_seed_range(seeds);
  if (threads > 0)
    cfg.threads = threads;
  else if (cfg.threads == 0)
    cfg.threads = env_threads();
  const ExperimentResult result =
      run_experiment(cfg, out.empty() ? cfg.out_dir : out);
  for (const auto& line : result.log) std::cout << line << '\n';
  for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-sum reshuffling methods: runs, variance sweeps, "
               "convergence-bound checks and plots"};
  app.require_subcommand(1);

  std::string config_path, out_dir, seeds, csv_path, svg_path;
  std::string metric = "dist", title;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seeds", seeds, "seed range a..b or list");
    sub->add_option("--threads", threads,
                    "worker threads (RESHUFFLE_THREADS as fallback)");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "record method trajectories");
  add_common(cmd_run);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "variance sweeps");
  add_common(cmd_sweep);
  CLI::App* cmd_check =
      app.add_subcommand("check", "validate convergence bounds");
  add_common(cmd_check);

  CLI::App* cmd_plot = app.add_subcommand("plot", "render a summary CSV to SVG");
  cmd_plot->add_option("--csv", csv_path, "summary CSV path")->required();
  cmd_plot->add_option("--svg", svg_path, "output SVG path")->required();
  cmd_plot->add_option("--metric", metric, "f | dist | grad");
  cmd_plot->add_option("--title", title, "plot title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed())
      return run_config_mode(config_path, out_dir, seeds, threads,
                             ExperimentConfig::Mode::kTrajectories, "run");
    if (cmd_sweep->parsed())
      return run_config_mode(config_path, out_dir, seeds, threads,
                             ExperimentConfig::Mode::kVarianceSweep, "sweep");
    if (cmd_check->parsed())
      return run_config_mode(config_path, out_dir, seeds, threads,
                             ExperimentConfig::Mode::kBoundCheck, "check");
    if (cmd_plot->parsed()) {
      std::ifstream in(csv_path);
      if (!in) {
        std::cerr << "error: cannot open " << csv_path << '\n';
        return 2;
      }
      const auto rows = parse_summary_csv(in);
      PlotSpec spec;
      if (metric == "f") {
        spec.metric = PlotMetric::kFValue;
        spec.y_label = "f(x_t)";
      } else if (metric == "dist") {
        spec.metric = PlotMetric::kDistSq;
        spec.y_label = "||x_t - x*||^2";
      } else if (metric == "grad") {
        spec.metric = PlotMetric::kGradNormSq;
        spec.y_label = "||grad f(x_t)||^2";
      } else {
        std::cerr << "error: unknown metric '" << metric << "'\n";
        return 2;
      }
      spec.title = title.empty() ? metric : title;
      const std::string svg = emit_plot(rows, spec);
      std::ofstream out(svg_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << svg_path << '\n';
        return 2;
      }
      out << svg;
      std::cout << "wrote " << svg_path << '\n';
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 2;
}
