#pragma once

// pCN sampling of rho_L = Z^{-1} exp((beta/(p L^gamma)) int |u|^p) 1{M(u) <= N L} mu_L
// on the truncated spectral grid, and the observables the concentration and
// local-mass statements are phrased in.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "nlsgibbs/rng.hpp"
#include "nlsgibbs/soliton.hpp"
#include "nlsgibbs/soliton_distance.hpp"
#include "nlsgibbs/stats.hpp"
#include "nlsgibbs/torus_field.hpp"

namespace nlsgibbs {

struct GibbsParams {
  double p = 4.0;
  double beta = 0.0;
  double alpha = 1.0;
  /// N; the cutoff is N L. Infinity switches the cutoff off.
  double mass_density = 1.0;
  double gamma = 0.0;
  double length = 32.0;
  std::size_t points = 512;  // grid size n (discretisation, not a physical parameter)

  static constexpr double no_cutoff = std::numeric_limits<double>::infinity();

  double mass_cutoff() const noexcept { return mass_density * length; }
  /// beta / (p L^gamma)
  double coupling() const noexcept;
  TorusGrid grid() const { return TorusGrid(length, points); }
  /// Throws InvalidArgument unless 2 < p <= 6, beta >= 0, alpha > 0, N > 0,
  /// gamma >= 0, L > 0 and Z is finite (p < 6, or p = 6 with N <= N0).
  void validate() const;
};

struct ChainState {
  Field field;
  double potential = 0.0;  // (beta/(p L^gamma)) int |u|^p
  double mass = 0.0;
  double step_size = 0.3;
  RandomStream rng;
  std::size_t step = 0;
  std::size_t accepted = 0;
};

/// Potential and mass recomputed from scratch.
double potential_of(const Field& u, const GibbsParams& params);

/// Fresh state at `field`. Throws InvalidArgument if the field violates the cutoff.
ChainState make_state(Field field, const GibbsParams& params, double step_size, RandomStream rng);

/// One pCN step u' = sqrt(1 - s^2) u + s xi, xi from the truncated mu_L. Cutoff
/// violations are rejected outright, otherwise accepted with probability
/// min(1, exp(Phi(u') - Phi(u))). Returns whether the move was accepted.
bool pcn_step(ChainState& state, const GibbsParams& params, const SpectralWeights& weights);

/// Recomputes the cached potential and mass, rebuilds the physical values from
/// the spectrum, and throws std::logic_error if the caches drifted by more
/// than 1e-8 relative.
void check_cache(ChainState& state, const GibbsParams& params);

struct ChainOptions {
  std::size_t step_count = 10000;  // total, burn-in included
  std::size_t burn_in = 1000;
  std::size_t thin = 10;
  double step_size = 0.3;
  std::uint64_t seed = 0;
  bool adapt = true;               // Robbins-Monro on log s during burn-in only
  double target_acceptance = 0.25;
  std::size_t init_attempts = 10000;
  bool keep_samples = false;       // store thinned fields in the result
  std::size_t cache_check_every = 1000;
  /// Called on every thinned sample after burn-in, in order.
  std::function<void(const ChainState&)> observer;
  /// Start here instead of drawing from mu_L.
  std::optional<Field> initial;
};

struct ChainStats {
  double acceptance_rate = 0.0;   // after burn-in
  double burn_in_acceptance = 0.0;
  double final_step_size = 0.0;
  std::size_t samples = 0;
  std::vector<double> mass_trace;       // thinned
  std::vector<double> potential_trace;  // thinned
  stats::Estimate mass;
  stats::Estimate potential;
  double seconds_per_step = 0.0;        // diagnostics only, never serialised
  bool zero_field_start = false;
  std::size_t init_attempts_used = 0;

  /// True when the smallest ESS among the recorded observables is below 50.
  bool poorly_mixed(double threshold = 50.0) const noexcept;
};

struct ChainResult {
  std::vector<Field> samples;
  ChainStats stats;
};

/// Runs one chain. The initial state is drawn from mu_L conditioned on the
/// cutoff by rejection; when N < 1/(2 sqrt(alpha)) the expected GFF mass
/// already exceeds the cutoff and the chain starts from the zero field.
/// Throws ChainInitError when rejection runs out of attempts.
ChainResult run_chain(const GibbsParams& params, const ChainOptions& options);

/// int_{-M}^{M} |u| dx (window snapped to the grid).
double observable_local_mass(const Field& u, double half_width);

/// Rescaling used by the concentration statistic: L^{-(p-2-2 gamma)/(6-p)}
/// off the critical line, 1 on it (gamma = p/2 - 1).
double concentration_lambda(const GibbsParams& params);

/// Coupling at which the soliton reference is computed. The Gaussian weight
/// exp(-||u||^2_{H^1_alpha}) (E|g|^2 = 1) carries int |u'|^2 with unit
/// coefficient, so the tilt balances against E at beta/2.
double reference_coupling(double beta) noexcept;

/// Closed-form ground state Q(beta_ref/2, N) sampled densely enough for the
/// probe at `lambda` on this torus.
SolitonProfile concentration_profile(const GibbsParams& params, double beta_ref, double lambda);

/// Probe for observable_concentration; beta_ref defaults to params.beta.
ConcentrationProbe make_concentration_probe(const GibbsParams& params, double q = 4.0,
                                            std::optional<double> beta_ref = std::nullopt);

double observable_concentration(const Field& u, const ConcentrationProbe& probe);

}  // namespace nlsgibbs
