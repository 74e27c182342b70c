#include "nlsgibbs/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlsgibbs/error.hpp"
#include "nlsgibbs/kernels.hpp"
#include "nlsgibbs/parallel.hpp"
#include "nlsgibbs/soliton.hpp"
#include "nlsgibbs/soliton_distance.hpp"

namespace nlsgibbs {

double drift_penalty(const Field& w, double alpha) {
  const auto& grid = w.grid();
  const auto spec = w.spectrum();
  const std::size_t nyq = grid.size() / 2;
  double total = 0.0, l2 = 0.0;
  for (std::size_t m = 0; m < spec.size(); ++m) {
    l2 += std::norm(spec[m]);
    if (m == nyq) continue;
    const double q = grid.wavenumber(m);
    total += (alpha + q * q) * std::norm(spec[m]);
  }
  // Round-off from a transform is tolerated, real Nyquist content is not.
  if (std::abs(spec[nyq]) > 1e-12 * std::sqrt(l2)) return std::numeric_limits<double>::infinity();
  return total;
}

DriftBoundResult bd_lower_bound(const GibbsParams& params, const Field& w, std::size_t sample_count,
                                RandomStream& rng) {
  params.validate();
  detail::require(sample_count >= 2, "bd_lower_bound: need at least two samples");
  const TorusGrid grid = params.grid();
  detail::require(w.grid() == grid, "bd_lower_bound: drift lives on a different grid");

  DriftBoundResult out;
  out.samples = sample_count;
  out.penalty = drift_penalty(w, params.alpha);
  const SpectralWeights weights(grid, params.alpha);
  const double cutoff = params.mass_cutoff();
  const double coupling = params.coupling();
  std::vector<double> f(sample_count);
  std::vector<cplx> shifted(grid.size());
  for (auto& v : f) {
    const Field phi = sample_gff(grid, weights, rng);
    kernels::linear_combination(1.0, phi.values(), 1.0, w.values(), shifted);
    const double m = kernels::sum_abs2(shifted) * grid.dx();
    v = m <= cutoff ? coupling * kernels::sum_abs_pow(shifted, params.p) * grid.dx() : 0.0;
  }
  const auto est = stats::iid_estimate(f);
  out.expectation = est.mean;
  out.std_error = est.std_error;
  out.lower_bound = out.expectation - out.penalty;
  return out;
}

double default_drift_scale(const GibbsParams& params) {
  detail::require(params.p < 6.0, "default_drift_scale: needs p < 6");
  return std::pow(params.length, -(params.p - 2.0 - 2.0 * params.gamma) / (6.0 - params.p));
}

Field soliton_drift(const GibbsParams& params, double delta, const DriftProfile& profile) {
  params.validate();
  detail::require(delta > 0.0, "soliton_drift: delta must be positive");
  const double beta = profile.beta.value_or(params.beta);
  const double mass_n = profile.mass.value_or(params.mass_density);
  detail::require(beta > 0.0 && mass_n > 0.0, "soliton_drift: the profile needs beta > 0 and N > 0");
  const TorusGrid grid = params.grid();

  const double decay = closed_form_decay_rate(params.p, beta, mass_n);
  const auto sp = sech_parameters(params.p, beta, decay);
  const double fwhm = 2.0 * std::acosh(std::pow(2.0, 1.0 / sp.power)) / sp.rate * delta;
  if (fwhm < 16.0 * grid.dx())
    throw InvalidArgument("soliton_drift: delta too small, the core is not resolved by the grid");

  // Dense line grid covering the rescaled torus plus the decaying tails.
  const double half = 0.5 * params.length / delta + 40.0 / std::sqrt(decay);
  const double h = std::min(0.25 * params.length / delta / static_cast<double>(grid.size()),
                            0.05 / std::sqrt(decay));
  std::size_t n = 1024;
  while (2.0 * half / static_cast<double>(n) > h && n < (std::size_t{1} << 22)) n *= 2;
  const auto q = ground_state(params.p, beta, mass_n, LineGrid(half, n));

  const Field raw = embed_soliton(q, grid, delta);
  std::vector<cplx> spec(raw.spectrum().begin(), raw.spectrum().end());
  spec[0] = 0.0;
  spec[grid.size() / 2] = 0.0;
  return Field::from_spectrum(grid, std::move(spec));
}

double DriftEnergy::relative_error() const noexcept {
  return std::abs(value - target) / std::abs(target);
}

DriftEnergy drift_energy(const GibbsParams& params, const Field& w) {
  params.validate();
  const auto& grid = w.grid();
  DriftEnergy e;
  e.potential = params.coupling() * lp_integral(w, params.p);
  double grad2 = 0.0;
  const auto spec = w.spectrum();
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const double k = grid.wavenumber(m);
    grad2 += k * k * std::norm(spec[m]);
  }
  e.kinetic = 0.5 * grad2;
  e.value = e.potential - e.kinetic;
  e.target = -std::pow(params.length, asymptotic_exponent(params.p, params.gamma)) *
             closed_form_energy(params.p, params.beta, params.mass_density);
  return e;
}

double asymptotic_exponent(double p, double gamma) {
  detail::require(p < 6.0, "asymptotic_exponent: needs p < 6");
  return (p + 2.0 - 4.0 * gamma) / (6.0 - p);
}

std::vector<double> refined_beta_grid(double beta_max, std::size_t count, double ratio) {
  detail::require(beta_max > 0.0, "refined_beta_grid: beta_max must be positive");
  detail::require(count >= 2, "refined_beta_grid: need at least two points");
  detail::require(ratio > 0.0 && ratio <= 1.0, "refined_beta_grid: ratio must lie in (0, 1]");
  const std::size_t steps = count - 1;
  std::vector<double> h(steps);
  double total = 0.0;
  for (std::size_t i = 0; i < steps; ++i) total += h[i] = std::pow(ratio, static_cast<double>(i));
  std::vector<double> grid{0.0};
  double acc = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    acc += h[i];
    grid.push_back(i + 1 == steps ? beta_max : beta_max * acc / total);
  }
  return grid;
}

namespace {

// log(e^a + e^b) without overflow.
double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

double ThermoResult::log_z_tilde(std::size_t i) const {
  const double p_cut = std::exp(anchor);
  const double rest = 1.0 - p_cut;
  if (rest <= 0.0) return points.at(i).log_z;
  return log_add_exp(points.at(i).log_z, std::log(rest));
}

double ThermoResult::log_z_tilde_error(std::size_t i) const {
  const double lz = points.at(i).log_z;
  return std::exp(lz - log_z_tilde(i)) * points.at(i).log_z_error;
}

ThermoResult log_Z_thermo(const GibbsParams& params, const std::vector<double>& beta_grid,
                          const ThermoOptions& options) {
  params.validate();
  detail::require(!beta_grid.empty() && beta_grid.front() == 0.0,
                  "log_Z_thermo: the beta grid must start at 0");
  for (std::size_t i = 1; i < beta_grid.size(); ++i)
    detail::require(beta_grid[i] > beta_grid[i - 1], "log_Z_thermo: the beta grid must increase");
  detail::require(options.anchor_samples >= 2, "log_Z_thermo: need anchor samples");

  const TorusGrid grid = params.grid();
  const double inv = 1.0 / (params.p * std::pow(params.length, params.gamma));
  ThermoResult out;
  out.points.resize(beta_grid.size());

  // Anchor and the beta = 0 integrand from independent draws of mu_L.
  {
    RandomStream rng(derive_seed(options.seed, 0));
    const SpectralWeights weights(grid, params.alpha);
    std::vector<double> integrand;
    for (std::size_t i = 0; i < options.anchor_samples; ++i) {
      const Field phi = sample_gff(grid, weights, rng);
      if (mass(phi) > params.mass_cutoff()) continue;
      integrand.push_back(inv * lp_integral(phi, params.p));
    }
    out.anchor_samples = options.anchor_samples;
    out.anchor_hits = integrand.size();
    const double frac = static_cast<double>(out.anchor_hits) / static_cast<double>(out.anchor_samples);
    auto& p0 = out.points[0];
    p0.beta = 0.0;
    p0.acceptance = 1.0;
    if (out.anchor_hits == 0) {
      out.anchor = -std::numeric_limits<double>::infinity();
      out.anchor_error = std::numeric_limits<double>::infinity();
      p0.tainted = true;
    } else {
      out.anchor = std::log(frac);
      out.anchor_error =
          std::sqrt((1.0 - frac) / (frac * static_cast<double>(out.anchor_samples)));
      p0.derivative = stats::iid_estimate(integrand);
      p0.tainted = out.anchor_hits < 2;
    }
  }

  parallel_for(beta_grid.size() - 1, options.threads, [&](std::size_t t) {
    const std::size_t i = t + 1;
    GibbsParams at = params;
    at.beta = beta_grid[i];
    ChainOptions chain = options.chain;
    chain.seed = derive_seed(options.seed, i);
    chain.keep_samples = false;
    const auto run = run_chain(at, chain);
    auto& pt = out.points[i];
    pt.beta = at.beta;
    pt.derivative = run.stats.potential;
    pt.derivative.mean /= at.beta;
    pt.derivative.std_error /= at.beta;
    pt.acceptance = run.stats.acceptance_rate;
    pt.tainted = run.stats.poorly_mixed(options.ess_threshold);
  });

  // Cumulative trapezoid; independent points, so variances add with the
  // squared quadrature weights.
  double acc = out.anchor;
  out.points[0].log_z = acc;
  out.points[0].log_z_error = out.anchor_error;
  for (std::size_t k = 1; k < out.points.size(); ++k) {
    const double h = beta_grid[k] - beta_grid[k - 1];
    acc += 0.5 * h * (out.points[k - 1].derivative.mean + out.points[k].derivative.mean);
    double var = out.anchor_error * out.anchor_error;
    for (std::size_t i = 0; i <= k; ++i) {
      double w = 0.0;
      if (i > 0) w += 0.5 * (beta_grid[i] - beta_grid[i - 1]);
      if (i < k) w += 0.5 * (beta_grid[i + 1] - beta_grid[i]);
      var += w * w * out.points[i].derivative.std_error * out.points[i].derivative.std_error;
    }
    out.points[k].log_z = acc;
    out.points[k].log_z_error = std::sqrt(var);
  }
  for (const auto& pt : out.points) out.tainted = out.tainted || pt.tainted;
  return out;
}

}  // namespace nlsgibbs
