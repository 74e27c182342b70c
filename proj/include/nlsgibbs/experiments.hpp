#pragma once

// Experiment drivers. Each expands a config into independent cells, runs them
// on a worker pool with per-cell seeds derive_seed(master, cell index) and
// collects one ResultRecord.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlsgibbs/gibbs_mcmc.hpp"
#include "nlsgibbs/record.hpp"

namespace nlsgibbs {

struct ExperimentConfig {
  std::string tag;  // sample | scan | concentration | ou | logz | tail

  // model; betas, lengths and gammas are scanned as a product
  double p = 4.0;
  double alpha = 1.0;
  double mass_density = 1.0;
  std::vector<double> betas{0.0};
  std::vector<double> lengths{32.0};
  std::vector<double> gammas{0.0};
  /// One grid size for every length, or one per length.
  std::vector<std::size_t> points{512};

  // mcmc budget per cell
  std::size_t steps = 20000;
  std::size_t burn_in = 2000;
  std::size_t thin = 10;
  double step_size = 0.3;
  bool adapt = true;
  double target_acceptance = 0.25;
  double ess_threshold = 50.0;

  // observables
  double local_mass_half_width = 2.0;      // M
  std::optional<double> ou_window;         // K, default L/8
  std::vector<double> lags{0.0, 0.5, 1.0, 2.0};
  double q = 4.0;
  std::optional<double> reference_beta;    // soliton reference for scan / control cells
  std::vector<double> deltas{0.1, 0.2, 0.4};

  // tail
  std::vector<double> intervals{16.0};     // |I|
  std::vector<double> thresholds{0.25, 0.5, 0.75, 1.0, 1.25};  // M / sqrt(|I|)
  std::size_t tail_samples = 10000;
  std::size_t min_exceedances = 20;

  // partition
  std::size_t anchor_samples = 20000;
  std::size_t drift_samples = 20000;
  std::optional<double> drift_beta;
  std::optional<double> drift_mass;

  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string output = "results";

  /// Throws ConfigError naming the offending key (section.key) on any
  /// violated invariant.
  void validate() const;
  /// Grid size used for lengths[i].
  std::size_t points_for(std::size_t length_index) const;
};

/// e^{-sqrt(alpha)|z|} / (2 sqrt(alpha)).
double ou_covariance(double alpha, double z);

/// One chain per (beta, L, gamma) cell: mass, potential, local mass.
ResultRecord sample_experiment(const ExperimentConfig& config);
/// Critical-line scan: soliton distance, order parameter, local mass, mass
/// density and windowed covariance discrepancy per (beta, L).
ResultRecord phase_scan(const ExperimentConfig& config);
/// Distance distribution and strip fractions per (beta, L), gamma < p/2 - 1.
ResultRecord supercritical_concentration(const ExperimentConfig& config);
/// Windowed covariance and pseudo-covariance per (beta, L, gamma, lag).
ResultRecord ou_limit_test(const ExperimentConfig& config);
/// Thermodynamic integration plus drift lower bounds per (L, gamma).
ResultRecord log_z_experiment(const ExperimentConfig& config);
/// Large-deviation tail of the window mass and its fitted slope.
ResultRecord ld_tail_experiment(const ExperimentConfig& config);

/// Dispatch on config.tag.
ResultRecord run_experiment(const ExperimentConfig& config);

}  // namespace nlsgibbs
