// nlsgibbs command-line driver.
//
// Exit codes: 0 success, 1 usage or config error, 2 solver or chain failure,
// 3 results tainted by a mixing warning.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nlsgibbs/config.hpp"
#include "nlsgibbs/error.hpp"
#include "nlsgibbs/experiments.hpp"
#include "nlsgibbs/minimizer.hpp"
#include "nlsgibbs/record.hpp"

namespace fs = std::filesystem;
using namespace nlsgibbs;

namespace {

enum Exit { ok = 0, usage = 1, solver = 2, tainted = 3 };

struct RunManifest {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  bool force = false;
  bool verbose = false;
};

void add_common(CLI::App* cmd, RunManifest& m, bool needs_config) {
  auto* c = cmd->add_option("--config", m.config_path, "experiment config file (INI)");
  if (needs_config) c->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", m.out_dir, "output directory (overrides experiment.output)");
  cmd->add_option("--seed", m.seed, "master seed (overrides experiment.seed)");
  cmd->add_option("--threads", m.threads, "worker threads (overrides experiment.threads)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--force", m.force, "overwrite existing result files");
  cmd->add_flag("--verbose", m.verbose, "print warnings and diagnostics");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void print_summary(const ResultRecord& r) {
  for (const auto& t : r.tables) {
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      std::cout << r.experiment << '/' << t.name << '[' << i << "]";
      for (std::size_t j = 0; j < t.columns.size(); ++j) std::cout << ' ' << t.columns[j] << '=' << fmt(t.rows[i][j]);
      std::cout << " status=" << t.status[i] << '\n';
    }
  }
}

int run_config(const std::string& tag, const RunManifest& m) {
  ExperimentConfig cfg = load_config(m.config_path);
  if (cfg.tag != tag)
    throw ConfigError("experiment.tag", "config is for '" + cfg.tag + "', subcommand is '" + tag + "'");
  if (m.seed) cfg.seed = *m.seed;
  if (m.threads) cfg.threads = *m.threads;
  if (!m.out_dir.empty()) cfg.output = m.out_dir;
  cfg.validate();

  // Refuse early rather than after hours of sampling.
  if (!m.force && fs::exists(fs::path(cfg.output) / (cfg.tag + ".json")))
    throw std::runtime_error("refusing to overwrite results in " + cfg.output + " (use --force)");

  const auto record = run_experiment(cfg);
  const auto paths = write_record(record, cfg.output, m.force);
  print_summary(record);
  if (m.verbose) {
    for (const auto& w : record.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& p : paths) std::cerr << "wrote " << p.string() << '\n';
  }
  if (record.failed) return solver;
  if (record.tainted) {
    std::cerr << "results tainted: at least one cell failed the mixing check\n";
    return tainted;
  }
  return ok;
}

struct MinimizeArgs {
  double p = 0.0, beta = 0.0, mass = 0.0;
  double half_width = 20.0;
  std::size_t points = 2048;
  std::optional<double> torus;
};

int run_minimize(const MinimizeArgs& a, const RunManifest& m) {
  MinimizationResult res;
  std::string label = "A";
  if (a.torus) {
    label = "B";
    res = minimize_B(a.p, a.beta, a.mass, TorusGrid(*a.torus, a.points));
  } else {
    res = minimize_A(a.p, a.beta, a.mass, a.half_width, a.points);
  }
  std::cout << label << " = " << fmt(res.energy) << '\n'
            << "lambda_mult = " << fmt(res.profile.lagrange_multiplier) << '\n'
            << "iterations = " << res.iterations << '\n';

  const fs::path dir = m.out_dir.empty() ? fs::path("results") : fs::path(m.out_dir);
  fs::create_directories(dir);
  const fs::path file = dir / "minimize_profile.csv";
  if (fs::exists(file) && !m.force)
    throw std::runtime_error("refusing to overwrite " + file.string() + " (use --force)");
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  char buf[96];
  out << "# p = " << fmt(a.p) << "\n# beta = " << fmt(a.beta) << "\n# mass = " << fmt(a.mass) << '\n';
  if (a.torus) out << "# torus_length = " << fmt(*a.torus) << '\n';
  else out << "# half_width = " << fmt(a.half_width) << '\n';
  out << "# points = " << a.points << '\n';
  std::snprintf(buf, sizeof buf, "# %s = %.17g\n", label.c_str(), res.energy);
  out << buf << "x,Q\n";
  const auto& g = res.profile.grid;
  for (std::size_t j = 0; j < res.profile.values.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.x(j), res.profile.values[j]);
    out << buf;
  }
  if (m.verbose) std::cerr << "wrote " << file.string() << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs measures for focusing NLS on large tori: soliton energies, sampling, partition functions"};
  app.require_subcommand(1);

  RunManifest manifest;
  MinimizeArgs margs;
  auto* minimize = app.add_subcommand("minimize", "minimise the soliton energy A (line) or B (torus)");
  minimize->add_option("--p", margs.p, "nonlinearity power")->required();
  minimize->add_option("--beta", margs.beta, "coupling")->required();
  minimize->add_option("--mass", margs.mass, "mass N")->required();
  minimize->add_option("--half-width", margs.half_width, "line half width R");
  minimize->add_option("--points", margs.points, "grid points");
  minimize->add_option("--torus", margs.torus, "torus length L (computes B instead of A)");
  add_common(minimize, manifest, false);

  const std::pair<const char*, const char*> experiments[] = {
      {"sample", "run one chain per cell"},
      {"scan", "phase scan on the critical line"},
      {"concentration", "supercritical concentration trend"},
      {"ou", "windowed covariance against the OU limit"},
      {"logz", "thermodynamic integration and drift lower bounds"},
      {"tail", "large-deviation tail of the window mass"}};
  for (const auto& [name, help] : experiments) add_common(app.add_subcommand(name, help), manifest, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return usage;
  }

  auto* sub = app.get_subcommands().front();
  manifest.subcommand = sub->get_name();
  try {
    if (manifest.subcommand == "minimize") return run_minimize(margs, manifest);
    return run_config(manifest.subcommand, manifest);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return usage;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return solver;
  } catch (const ChainInitError& e) {
    std::cerr << "chain failure: " << e.what() << '\n';
    return solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
}
