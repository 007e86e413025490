#include "reshuffle/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace reshuffle {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = s.find(sep, start);
    if (p == std::string::npos) {
      const std::string piece = trim(s.substr(start));
      if (!piece.empty()) out.push_back(piece);
      return out;
    }
    const std::string piece = trim(s.substr(start, p - start));
    if (!piece.empty()) out.push_back(piece);
    start = p + 1;
  }
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': bad number '" + s + "'");
  }
}

long parse_long(const std::string& s, const std::string& key) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("key '" + key + "': bad integer '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("key '" + key + "': bad boolean '" + s + "'");
}

// Points separated by ';' with ',' coordinates; a plain comma list is a set
// of scalars.
std::vector<Vector> parse_points(const std::string& s, const std::string& key) {
  std::vector<Vector> out;
  if (s.find(';') == std::string::npos) {
    for (const std::string& tok : split(s, ',')) {
      Vector v(1);
      v[0] = parse_double(tok, key);
      out.push_back(v);
    }
    return out;
  }
  for (const std::string& point : split(s, ';')) {
    const auto coords = split(point, ',');
    Vector v(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
      v[i] = parse_double(coords[i], key);
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_gamma_grid(const std::string& s,
                                     const std::string& key) {
  if (s.rfind("geometric:", 0) == 0) {
    const auto parts = split(s.substr(10), ':');
    if (parts.size() != 3)
      throw ConfigError("key '" + key + "': expected geometric:hi:lo:count");
    const double hi = parse_double(parts[0], key);
    const double lo = parse_double(parts[1], key);
    const long count = parse_long(parts[2], key);
    if (!(hi > 0.0) || !(lo > 0.0) || count < 2 || hi <= lo)
      throw ConfigError("key '" + key + "': bad geometric grid");
    std::vector<double> grid(count);
    const double ratio = std::pow(lo / hi, 1.0 / (count - 1));
    double g = hi;
    for (long i = 0; i < count; ++i, g *= ratio) grid[i] = g;
    return grid;
  }
  std::vector<double> grid;
  for (const std::string& tok : split(s, ','))
    grid.push_back(parse_double(tok, key));
  return grid;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const std::size_t dots = text.find("..");
  std::vector<std::uint64_t> out;
  if (dots != std::string::npos) {
    const long a = parse_long(trim(text.substr(0, dots)), "seeds");
    const long b = parse_long(trim(text.substr(dots + 2)), "seeds");
    if (a < 0 || b < a) throw ConfigError("bad seed range '" + text + "'");
    for (long s = a; s <= b; ++s) out.push_back(static_cast<std::uint64_t>(s));
    return out;
  }
  for (const std::string& tok : split(text, ','))
    out.push_back(static_cast<std::uint64_t>(parse_long(tok, "seeds")));
  if (out.empty()) throw ConfigError("seeds must be nonempty");
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_methods = false, saw_seeds = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string val = trim(stripped.substr(eq + 1));
    if (val.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' has no value");

    if (key == "mode") {
      if (val == "trajectories") cfg.mode = ExperimentConfig::Mode::kTrajectories;
      else if (val == "variance-sweep") cfg.mode = ExperimentConfig::Mode::kVarianceSweep;
      else if (val == "bound-check") cfg.mode = ExperimentConfig::Mode::kBoundCheck;
      else throw ConfigError("unknown mode '" + val + "'");
    } else if (key == "problem") {
      if (val == "quadratic") cfg.problem = ExperimentConfig::ProblemKind::kQuadratic;
      else if (val == "quadratic-random") cfg.problem = ExperimentConfig::ProblemKind::kQuadraticRandom;
      else if (val == "cosine") cfg.problem = ExperimentConfig::ProblemKind::kCosine;
      else if (val == "libsvm") cfg.problem = ExperimentConfig::ProblemKind::kLibsvm;
      else throw ConfigError("unknown problem '" + val + "'");
    } else if (key == "centers") {
      cfg.centers = parse_points(val, key);
    } else if (key == "curvatures") {
      for (const std::string& tok : split(val, ','))
        cfg.curvatures.push_back(parse_double(tok, key));
    } else if (key == "N") {
      cfg.random_N = static_cast<int>(parse_long(val, key));
    } else if (key == "dim") {
      cfg.random_dim = static_cast<int>(parse_long(val, key));
    } else if (key == "problem_seed") {
      cfg.problem_seed = static_cast<std::uint64_t>(parse_long(val, key));
    } else if (key == "center_scale") {
      cfg.center_scale = parse_double(val, key);
    } else if (key == "libsvm_path") {
      cfg.libsvm_path = val;
    } else if (key == "dim_override") {
      cfg.dim_override = static_cast<int>(parse_long(val, key));
    } else if (key == "lambda") {
      if (val != "auto") cfg.lambda = parse_double(val, key);
    } else if (key == "tau") {
      cfg.tau = static_cast<int>(parse_long(val, key));
    } else if (key == "base_ordering") {
      cfg.base_ordering = val;
    } else if (key == "methods") {
      saw_methods = true;
      for (const std::string& tok : split(val, ',')) {
        const auto m = method_from_name(tok);
        if (!m) throw ConfigError("unknown method '" + tok + "'");
        cfg.methods.push_back(*m);
      }
    } else if (key == "schedule") {
      if (val == "constant") cfg.constant_schedule = true;
      else if (val == "capped-inverse") cfg.constant_schedule = false;
      else throw ConfigError("unknown schedule '" + val + "'");
    } else if (key == "gamma") {
      cfg.gamma = parse_double(val, key);
    } else if (key == "c_rr") {
      cfg.c_rr = parse_double(val, key);
    } else if (key == "c_sgd") {
      cfg.c_sgd = parse_double(val, key);
    } else if (key == "k0") {
      if (val != "auto") cfg.k0 = parse_long(val, key);
    } else if (key == "sgd_window") {
      cfg.sgd_window = static_cast<int>(parse_long(val, key));
    } else if (key == "epochs") {
      cfg.epochs = static_cast<int>(parse_long(val, key));
    } else if (key == "seeds") {
      saw_seeds = true;
      cfg.seeds = parse_seed_range(val);
    } else if (key == "x0") {
      for (const std::string& tok : split(val, ','))
        cfg.x0.push_back(parse_double(tok, key));
    } else if (key == "record_inner") {
      cfg.record_inner = parse_bool(val, key);
    } else if (key == "record_every") {
      cfg.record_every = static_cast<int>(parse_long(val, key));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_long(val, key));
    } else if (key == "theorem") {
      for (const std::string& tok : split(val, ',')) {
        const auto id = theorem_from_name(tok);
        if (!id) throw ConfigError("unknown theorem '" + tok + "'");
        cfg.theorems.push_back(*id);
      }
    } else if (key == "slack") {
      cfg.slack = parse_double(val, key);
    } else if (key == "num_perms") {
      cfg.num_perms = val == "exact" ? 0 : parse_long(val, key);
    } else if (key == "mc_seed") {
      cfg.mc_seed = static_cast<std::uint64_t>(parse_long(val, key));
    } else if (key == "tau_grid") {
      for (const std::string& tok : split(val, ','))
        cfg.tau_grid.push_back(static_cast<int>(parse_long(tok, key)));
    } else if (key == "gamma_grid") {
      cfg.gamma_grid = parse_gamma_grid(val, key);
    } else if (key == "sweep_gamma") {
      cfg.sweep_gamma = parse_double(val, key);
    } else if (key == "sweep_tau") {
      cfg.sweep_tau = static_cast<int>(parse_long(val, key));
    } else if (key == "dist_samples") {
      cfg.dist_samples = parse_long(val, key);
    } else if (key == "out") {
      cfg.out_dir = val;
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
  }

  if (cfg.mode != ExperimentConfig::Mode::kVarianceSweep) {
    if (!saw_methods || cfg.methods.empty())
      throw ConfigError("config needs at least one method");
    if (!saw_seeds) {
      // Plot-style runs default to 20 seeds; bound checks need larger
      // ensembles for usable confidence intervals.
      const long count =
          cfg.mode == ExperimentConfig::Mode::kBoundCheck ? 500 : 20;
      for (long s = 0; s < count; ++s)
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
    if (cfg.seeds.empty())
      throw ConfigError("config needs a nonempty seed list");
  }
  if (cfg.mode == ExperimentConfig::Mode::kBoundCheck && cfg.theorems.empty())
    throw ConfigError("bound-check mode needs a 'theorem' list");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace reshuffle
