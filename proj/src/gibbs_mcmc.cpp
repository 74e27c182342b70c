#include "nlsgibbs/gibbs_mcmc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "nlsgibbs/error.hpp"
#include "nlsgibbs/kernels.hpp"

namespace nlsgibbs {

double GibbsParams::coupling() const noexcept { return beta / (p * std::pow(length, gamma)); }

void GibbsParams::validate() const {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidArgument("GibbsParams: p must lie in (2, 6]");
  if (!(beta >= 0.0)) throw InvalidArgument("GibbsParams: beta must be nonnegative");
  if (!(alpha > 0.0)) throw InvalidArgument("GibbsParams: alpha must be positive");
  if (!(mass_density > 0.0)) throw InvalidArgument("GibbsParams: mass density must be positive");
  if (!(gamma >= 0.0)) throw InvalidArgument("GibbsParams: gamma must be nonnegative");
  if (!(length > 0.0)) throw InvalidArgument("GibbsParams: length must be positive");
  (void)grid();  // validates points
  if (p == 6.0 && beta > 0.0) {
    const double n0 = critical_mass_N0(beta, gns_ratio_closed_form(6.0));
    if (!(mass_density <= n0)) throw InvalidArgument("GibbsParams: p = 6 requires N <= N0(beta)");
  }
}

double potential_of(const Field& u, const GibbsParams& params) {
  if (params.beta == 0.0) return 0.0;
  return params.coupling() * kernels::sum_abs_pow(u.values(), params.p) * u.grid().dx();
}

ChainState make_state(Field field, const GibbsParams& params, double step_size, RandomStream rng) {
  const double m = mass(field);
  if (m > params.mass_cutoff()) throw InvalidArgument("chain state violates the mass cutoff");
  const double phi = potential_of(field, params);
  return ChainState{std::move(field), phi, m, step_size, std::move(rng), 0, 0};
}

bool pcn_step(ChainState& state, const GibbsParams& params, const SpectralWeights& weights) {
  const TorusGrid& grid = state.field.grid();
  const std::size_t n = grid.size();
  const double s = state.step_size;
  const double rho = std::sqrt(std::max(0.0, 1.0 - s * s));

  std::vector<cplx> xi_spec(n);
  for (auto& c : xi_spec) c = state.rng.complex_normal();
  kernels::scale_by(xi_spec, weights.sigma);
  const auto xi_vals = values_from_spectrum(grid, xi_spec);

  std::vector<cplx> vals(n), spec(n);
  kernels::linear_combination(rho, state.field.values(), s, xi_vals, vals);
  kernels::linear_combination(rho, state.field.spectrum(), s, xi_spec, spec);

  ++state.step;
  const double m = kernels::sum_abs2(vals) * grid.dx();
  if (m > params.mass_cutoff()) return false;
  const double phi =
      params.beta == 0.0 ? 0.0 : params.coupling() * kernels::sum_abs_pow(vals, params.p) * grid.dx();
  const double log_ratio = phi - state.potential;
  if (log_ratio < 0.0 && std::log(state.rng.uniform()) >= log_ratio) return false;

  state.field = Field::from_consistent_parts(grid, std::move(vals), std::move(spec));
  state.potential = phi;
  state.mass = m;
  ++state.accepted;
  return true;
}

void check_cache(ChainState& state, const GibbsParams& params) {
  const auto& grid = state.field.grid();
  std::vector<cplx> spec(state.field.spectrum().begin(), state.field.spectrum().end());
  const double spectral_mass = kernels::sum_abs2(spec);
  auto rebuilt = Field::from_spectrum(grid, std::move(spec));
  const double m = mass(rebuilt);
  const double phi = potential_of(rebuilt, params);
  auto off = [](double cached, double fresh) {
    return std::abs(cached - fresh) > 1e-8 * std::max(std::abs(fresh), 1e-300);
  };
  if (off(state.mass, m) || off(state.mass, spectral_mass) || (phi != 0.0 && off(state.potential, phi))) {
    throw std::logic_error("pCN chain caches drifted from the field");
  }
  state.field = std::move(rebuilt);
  state.mass = m;
  state.potential = phi;
}

bool ChainStats::poorly_mixed(double threshold) const noexcept {
  if (samples == 0) return false;
  return std::min(mass.ess, potential.ess) < threshold;
}

ChainResult run_chain(const GibbsParams& params, const ChainOptions& options) {
  params.validate();
  if (options.step_count < options.burn_in) throw InvalidArgument("run_chain: step_count < burn_in");
  if (options.thin == 0) throw InvalidArgument("run_chain: thin must be positive");
  if (!(options.step_size >= 0.0 && options.step_size <= 1.0)) {
    throw InvalidArgument("run_chain: step size must lie in [0, 1]");
  }
  const TorusGrid grid = params.grid();
  const SpectralWeights weights(grid, params.alpha);
  RandomStream rng(options.seed);

  ChainResult result;
  ChainStats& st = result.stats;

  // initial state
  std::optional<Field> start;
  if (options.initial) {
    start = *options.initial;
  } else if (params.mass_density < 1.0 / (2.0 * std::sqrt(params.alpha))) {
    start = Field::zero(grid);
    st.zero_field_start = true;
  } else {
    for (std::size_t a = 0; a < options.init_attempts; ++a) {
      Field f = sample_gff(grid, weights, rng);
      st.init_attempts_used = a + 1;
      if (mass(f) <= params.mass_cutoff()) {
        start = std::move(f);
        break;
      }
    }
    if (!start) {
      throw ChainInitError("run_chain: no GFF draw satisfied the mass cutoff in " +
                           std::to_string(options.init_attempts) +
                           " attempts; use a larger N or a smaller L");
    }
  }
  ChainState state = make_state(std::move(*start), params, options.step_size, std::move(rng));

  const auto t0 = std::chrono::steady_clock::now();
  double log_s = std::log(std::max(options.step_size, 1e-12));
  std::size_t burn_accepted = 0;
  std::size_t post_accepted = 0;
  for (std::size_t i = 0; i < options.step_count; ++i) {
    const bool acc = pcn_step(state, params, weights);
    if (i < options.burn_in) {
      burn_accepted += acc;
      if (options.adapt && options.step_size > 0.0) {
        const double gain = 1.0 / std::pow(static_cast<double>(i) + 10.0, 0.6);
        log_s += gain * ((acc ? 1.0 : 0.0) - options.target_acceptance);
        log_s = std::clamp(log_s, std::log(1e-4), 0.0);
        state.step_size = std::exp(log_s);
      }
    } else {
      post_accepted += acc;
      const std::size_t k = i - options.burn_in + 1;
      if (k % options.thin == 0) {
        st.mass_trace.push_back(state.mass);
        st.potential_trace.push_back(state.potential);
        if (options.keep_samples) result.samples.push_back(state.field);
        if (options.observer) options.observer(state);
      }
    }
    if (options.cache_check_every > 0 && (i + 1) % options.cache_check_every == 0) {
      check_cache(state, params);
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::size_t post = options.step_count - options.burn_in;
  st.acceptance_rate = post > 0 ? static_cast<double>(post_accepted) / static_cast<double>(post) : 0.0;
  st.burn_in_acceptance = options.burn_in > 0
                              ? static_cast<double>(burn_accepted) / static_cast<double>(options.burn_in)
                              : 0.0;
  st.final_step_size = state.step_size;
  st.samples = st.mass_trace.size();
  st.mass = stats::batch_means(st.mass_trace);
  st.potential = stats::batch_means(st.potential_trace);
  st.seconds_per_step =
      options.step_count > 0 ? elapsed / static_cast<double>(options.step_count) : 0.0;
  return result;
}

double observable_local_mass(const Field& u, double half_width) {
  if (!(half_width >= 0.0) || half_width > 0.5 * u.grid().length() * (1.0 + 1e-12)) {
    throw InvalidArgument("local mass: M must lie in [0, L/2]");
  }
  return lp_integral(u, 1.0, Window::centered(std::min(half_width, 0.5 * u.grid().length())));
}

double concentration_lambda(const GibbsParams& params) {
  const double critical = 0.5 * params.p - 1.0;
  if (std::abs(params.gamma - critical) < 1e-12) return 1.0;
  if (!(params.p < 6.0)) throw InvalidArgument("concentration_lambda: p must be < 6");
  return std::pow(params.length, -(params.p - 2.0 - 2.0 * params.gamma) / (6.0 - params.p));
}

double reference_coupling(double beta) noexcept { return 0.5 * beta; }

SolitonProfile concentration_profile(const GibbsParams& params, double beta_ref, double lambda) {
  if (!(beta_ref > 0.0)) throw InvalidArgument("concentration profile needs a positive reference beta");
  const double b = reference_coupling(beta_ref);
  const double decay = closed_form_decay_rate(params.p, b, params.mass_density);
  const double half = 0.5 * params.length / lambda + 40.0 / std::sqrt(decay);
  // spacing well below both the rescaled torus spacing and the core width
  const double dy = params.length / lambda / static_cast<double>(params.points);
  const double h = std::min(0.25 * dy, 0.05 / std::sqrt(decay));
  std::size_t n = 1024;
  while (2.0 * half / static_cast<double>(n) > h && n < (std::size_t{1} << 22)) n *= 2;
  return ground_state(params.p, b, params.mass_density, LineGrid(half, n));
}

ConcentrationProbe make_concentration_probe(const GibbsParams& params, double q,
                                            std::optional<double> beta_ref) {
  const double lambda = concentration_lambda(params);
  const auto profile = concentration_profile(params, beta_ref.value_or(params.beta), lambda);
  return ConcentrationProbe(profile, params.grid(), lambda, q);
}

double observable_concentration(const Field& u, const ConcentrationProbe& probe) {
  return probe(u).distance;
}

}  // namespace nlsgibbs
