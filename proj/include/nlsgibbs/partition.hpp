#pragma once

// log Z estimates: thermodynamic integration in beta, the deterministic-drift
// Boue-Dupuis lower bound and the soliton drift w_delta.
//
// The Gaussian reference has density exp(-||u||^2_{H^1_alpha}) (E|g_k|^2 = 1
// per mode), so shifting it by a fixed w costs the relative entropy
// sum_k |c_k(w)|^2 / sigma_k^2 = ||w||^2_{H^1_alpha}. That full norm is the
// penalty subtracted below.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlsgibbs/gibbs_mcmc.hpp"
#include "nlsgibbs/rng.hpp"
#include "nlsgibbs/stats.hpp"
#include "nlsgibbs/torus_field.hpp"

namespace nlsgibbs {

struct DriftBoundResult {
  double lower_bound = 0.0;  // expectation - penalty
  double std_error = 0.0;
  double penalty = 0.0;      // ||w||^2_{H^1_alpha}
  double expectation = 0.0;  // E[1{M(phi+w) <= NL} Phi(phi+w)]
  std::size_t samples = 0;
};

/// ||w||^2_{H^1_alpha} = sum_k (alpha + (2 pi k/L)^2) |c_k|^2. Infinite if w has
/// weight beyond round-off on the Nyquist slot, which the truncated field
/// never charges.
double drift_penalty(const Field& w, double alpha);

/// Monte Carlo estimate of E[F(phi + w)] - ||w||^2_{H^1_alpha} with phi ~ mu_L
/// and F = 1{M <= NL} (beta/(p L^gamma)) int |.|^p; a lower bound on log Z~.
DriftBoundResult bd_lower_bound(const GibbsParams& params, const Field& w, std::size_t sample_count,
                                RandomStream& rng);

/// delta = L^{-(p-2-2 gamma)/(6-p)}.
double default_drift_scale(const GibbsParams& params);

/// Which ground state the drift is built from. Defaults are (beta, N) of the
/// parameters; the mass can be lowered to leave room for the fluctuation mass
/// L/(2 sqrt(alpha)) under the cutoff.
struct DriftProfile {
  std::optional<double> beta;
  std::optional<double> mass;
};

/// w_delta(x) = L^{1/2} delta^{-1/2} Q(x/delta) minus its torus mean, with the
/// Nyquist slot cleared. Throws InvalidArgument if the core of Q(x/delta)
/// (full width at half maximum) spans fewer than 16 grid points.
Field soliton_drift(const GibbsParams& params, double delta, const DriftProfile& profile = {});

struct DriftEnergy {
  double potential = 0.0;  // (beta/(p L^gamma)) int |w|^p
  double kinetic = 0.0;    // (1/2) int |w'|^2
  double value = 0.0;      // potential - kinetic
  double target = 0.0;     // -L^{exponent} A(beta, N)
  double relative_error() const noexcept;
};

/// Compares the drift's energy with the rescaled soliton energy.
DriftEnergy drift_energy(const GibbsParams& params, const Field& w);

/// (p + 2 - 4 gamma) / (6 - p), p < 6.
double asymptotic_exponent(double p, double gamma);

/// {0, b_1, ..., b_{count-1} = beta_max} with spacings shrinking by `ratio`
/// toward the top. count >= 2, 0 < ratio <= 1.
std::vector<double> refined_beta_grid(double beta_max, std::size_t count, double ratio = 0.7);

struct ThermoOptions {
  ChainOptions chain;              // seed is replaced per beta point
  std::uint64_t seed = 0;
  std::size_t anchor_samples = 20000;
  std::size_t threads = 1;
  double ess_threshold = 50.0;
};

struct ThermoPoint {
  double beta = 0.0;
  /// d log Z / d beta = E_beta[(1/(p L^gamma)) int |u|^p].
  stats::Estimate derivative;
  double log_z = 0.0;
  double log_z_error = 0.0;  // cumulative, anchor included
  double acceptance = 0.0;   // 1 for the direct beta = 0 point
  bool tainted = false;
};

struct ThermoResult {
  std::vector<ThermoPoint> points;
  double anchor = 0.0;        // log P(M <= NL)
  double anchor_error = 0.0;
  std::size_t anchor_hits = 0;
  std::size_t anchor_samples = 0;
  std::string rule = "trapezoid";
  bool tainted = false;

  /// log Z~ = log(Z + 1 - P(M <= NL)) at grid point i, and its error.
  double log_z_tilde(std::size_t i) const;
  double log_z_tilde_error(std::size_t i) const;
};

/// Thermodynamic integration over `beta_grid` (strictly increasing, starting
/// at 0). The beta = 0 integrand and the anchor come from direct GFF draws;
/// every other point runs one pCN chain. Points run in parallel.
ThermoResult log_Z_thermo(const GibbsParams& params, const std::vector<double>& beta_grid,
                          const ThermoOptions& options);

}  // namespace nlsgibbs
