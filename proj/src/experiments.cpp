#include "nlsgibbs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "nlsgibbs/config.hpp"
#include "nlsgibbs/error.hpp"
#include "nlsgibbs/parallel.hpp"
#include "nlsgibbs/partition.hpp"
#include "nlsgibbs/stats.hpp"

namespace nlsgibbs {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

bool power_of_two(std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

struct Cell {
  double beta = 0.0;
  double length = 0.0;
  double gamma = 0.0;
  std::size_t points = 0;

  GibbsParams params(const ExperimentConfig& c) const {
    GibbsParams g;
    g.p = c.p;
    g.beta = beta;
    g.alpha = c.alpha;
    g.mass_density = c.mass_density;
    g.gamma = gamma;
    g.length = length;
    g.points = points;
    return g;
  }
  std::vector<double> key() const { return {beta, length, gamma, static_cast<double>(points)}; }
};

const std::vector<std::string> key_columns{"beta", "length", "gamma", "points"};

// Product of the scanned lists: lengths outermost, betas innermost.
std::vector<Cell> expand(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (std::size_t li = 0; li < c.lengths.size(); ++li)
    for (double g : c.gammas)
      for (double b : c.betas) cells.push_back({b, c.lengths[li], g, c.points_for(li)});
  return cells;
}

ChainOptions chain_options(const ExperimentConfig& c, std::uint64_t seed) {
  ChainOptions o;
  o.step_count = c.steps;
  o.burn_in = c.burn_in;
  o.thin = c.thin;
  o.step_size = c.step_size;
  o.adapt = c.adapt;
  o.target_acceptance = c.target_acceptance;
  o.seed = seed;
  return o;
}

struct CellOutput {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> status;
  std::vector<std::string> warnings;
  bool tainted = false;
  bool failed = false;

  void add(std::vector<double> row, bool row_tainted) {
    rows.push_back(std::move(row));
    status.emplace_back(row_tainted ? "tainted" : "ok");
    tainted = tainted || row_tainted;
  }
};

ResultRecord new_record(const ExperimentConfig& c) {
  ResultRecord r;
  r.experiment = c.tag;
  r.version = software_version();
  r.seed = c.seed;
  r.config = render_config(c, false);
  return r;
}

// Runs fn(cell, seed) for every cell on the pool and assembles the rows in
// cell order. A throwing cell becomes one failed row; the others are kept.
template <class Fn>
void run_cells(const ExperimentConfig& c, const std::vector<Cell>& cells, std::size_t threads,
               Table& table, ResultRecord& record, Fn fn) {
  std::vector<CellOutput> out(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    try {
      out[i] = fn(cells[i], derive_seed(c.seed, i));
    } catch (const std::exception& e) {
      CellOutput f;
      auto row = cells[i].key();
      row.resize(table.columns.size(), nan);
      f.rows.push_back(std::move(row));
      f.status.push_back(std::string("failed: ") + e.what());
      f.failed = true;
      out[i] = std::move(f);
    }
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t k = 0; k < out[i].rows.size(); ++k)
      table.add_row(std::move(out[i].rows[k]), out[i].status[k]);
    for (auto& w : out[i].warnings) record.warnings.push_back(std::move(w));
    record.tainted = record.tainted || out[i].tainted;
    record.failed = record.failed || out[i].failed;
    if (out[i].failed)
      record.warnings.push_back("cell " + std::to_string(i) + " " + out[i].status.front());
  }
}

double max_beta(const ExperimentConfig& c) { return *std::max_element(c.betas.begin(), c.betas.end()); }

double min_ess(std::initializer_list<stats::Estimate> es) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : es) m = std::min(m, e.ess);
  return std::isfinite(m) ? m : 0.0;
}

// Average of phi(x + z) conj(phi(x)) and phi(x + z) phi(x) over the window,
// with z = shift grid steps.
struct LagMoments {
  cplx covariance;
  cplx pseudo;
};

LagMoments lag_moments(const Field& u, std::size_t lo, std::size_t hi, std::size_t shift) {
  const auto v = u.values();
  const std::size_t n = v.size();
  cplx c{}, p{};
  for (std::size_t j = lo; j < hi; ++j) {
    const cplx a = v[(j + shift) % n];
    c += a * std::conj(v[j]);
    p += a * v[j];
  }
  const double inv = 1.0 / static_cast<double>(hi - lo);
  return {c * inv, p * inv};
}

}  // namespace

std::size_t ExperimentConfig::points_for(std::size_t length_index) const {
  return points.size() == 1 ? points.front() : points.at(length_index);
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> tags{"sample", "scan", "concentration", "ou", "logz", "tail"};
  auto fail = [](const std::string& key, const std::string& msg) { throw ConfigError(key, msg); };
  if (!tags.contains(tag))
    fail("experiment.tag", "must be one of sample, scan, concentration, ou, logz, tail (got '" + tag + "')");
  if (threads == 0) fail("experiment.threads", "must be positive");
  if (output.empty()) fail("experiment.output", "must not be empty");

  if (!(p > 2.0 && p <= 6.0)) fail("model.p", "must lie in (2, 6]");
  if (!(alpha > 0.0)) fail("model.alpha", "must be positive");
  if (!(mass_density > 0.0)) fail("model.mass_density", "must be positive");
  if (betas.empty()) fail("model.betas", "must not be empty");
  for (double b : betas)
    if (!(b >= 0.0) || !std::isfinite(b)) fail("model.betas", "entries must be finite and nonnegative");
  if (lengths.empty()) fail("model.lengths", "must not be empty");
  for (double l : lengths)
    if (!(l > 0.0) || !std::isfinite(l)) fail("model.lengths", "entries must be positive");
  if (gammas.empty()) fail("model.gammas", "must not be empty");
  for (double g : gammas)
    if (!(g >= 0.0) || !std::isfinite(g)) fail("model.gammas", "entries must be nonnegative");
  if (points.size() != 1 && points.size() != lengths.size())
    fail("model.points", "give one grid size or one per length");
  for (auto n : points)
    if (!power_of_two(n)) fail("model.points", "grid sizes must be powers of two >= 8");

  if (steps == 0) fail("mcmc.steps", "budget must be positive");
  if (burn_in > steps) fail("mcmc.burn_in", "must not exceed mcmc.steps");
  if (thin == 0) fail("mcmc.thin", "must be positive");
  if (!(step_size > 0.0 && step_size <= 1.0)) fail("mcmc.step_size", "must lie in (0, 1]");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
    fail("mcmc.target_acceptance", "must lie in (0, 1)");
  if (!(ess_threshold >= 0.0)) fail("mcmc.ess_threshold", "must be nonnegative");

  if (!(local_mass_half_width > 0.0)) fail("observables.local_mass_half_width", "must be positive");
  if (ou_window && !(*ou_window > 0.0)) fail("observables.ou_window", "must be positive");
  if (lags.empty()) fail("observables.lags", "must not be empty");
  if (!(q >= 2.0)) fail("observables.q", "must be at least 2");
  if (reference_beta && !(*reference_beta > 0.0)) fail("observables.reference_beta", "must be positive");
  if (deltas.empty()) fail("observables.deltas", "must not be empty");
  for (double d : deltas)
    if (!(d > 0.0)) fail("observables.deltas", "entries must be positive");

  if (intervals.empty()) fail("tail.intervals", "must not be empty");
  if (thresholds.empty()) fail("tail.thresholds", "must not be empty");
  if (tail_samples < 100) fail("tail.samples", "needs at least 100 samples");
  if (anchor_samples < 2) fail("partition.anchor_samples", "needs at least 2 samples");
  if (drift_samples < 2) fail("partition.drift_samples", "needs at least 2 samples");

  for (std::size_t li = 0; li < lengths.size(); ++li) {
    for (double g : gammas) {
      for (double b : betas) {
        Cell cell{b, lengths[li], g, points_for(li)};
        try {
          cell.params(*this).validate();
        } catch (const InvalidArgument& e) {
          fail("model", e.what());
        }
      }
    }
    if (local_mass_half_width > 0.5 * lengths[li] && (tag == "sample" || tag == "scan"))
      fail("observables.local_mass_half_width", "must not exceed L/2");
    if (ou_window && *ou_window > 0.5 * lengths[li] && tag == "ou")
      fail("observables.ou_window", "must not exceed L/2");
  }

  const double critical = 0.5 * p - 1.0;
  if (tag == "scan") {
    for (double g : gammas)
      if (std::abs(g - critical) > 1e-12) fail("model.gammas", "the phase scan runs on gamma = p/2 - 1");
    if (!(reference_beta || max_beta(*this) > 0.0))
      fail("observables.reference_beta", "the scan needs a positive reference beta");
  }
  if (tag == "concentration") {
    for (double g : gammas)
      if (!(g < critical)) fail("model.gammas", "the supercritical experiment needs gamma < p/2 - 1");
    if (!(p < 6.0)) fail("model.p", "needs p < 6");
    if (!(reference_beta || max_beta(*this) > 0.0))
      fail("observables.reference_beta", "a beta = 0 control needs a positive reference beta");
  }
  if (tag == "ou" && !(mass_density > 1.0 / (2.0 * std::sqrt(alpha))))
    fail("model.mass_density", "the OU test needs N > 1/(2 sqrt(alpha))");
  if (tag == "logz") {
    if (betas.front() != 0.0) fail("model.betas", "the thermodynamic grid must start at 0");
    for (std::size_t i = 1; i < betas.size(); ++i)
      if (!(betas[i] > betas[i - 1])) fail("model.betas", "the thermodynamic grid must increase");
    if (!(p < 6.0)) fail("model.p", "needs p < 6");
  }
  if (tag == "tail") {
    if (thresholds.size() < 2) fail("tail.thresholds", "a slope fit needs at least two thresholds");
    for (double i : intervals)
      for (double l : lengths)
        if (i > l) fail("tail.intervals", "interval longer than the torus");
  }
}

double ou_covariance(double alpha, double z) {
  detail::require(alpha > 0.0, "ou_covariance: alpha must be positive");
  const double r = std::sqrt(alpha);
  return std::exp(-r * std::abs(z)) / (2.0 * r);
}

ResultRecord sample_experiment(const ExperimentConfig& c) {
  c.validate();
  auto record = new_record(c);
  Table t;
  t.name = "cells";
  t.columns = key_columns;
  for (const char* col : {"acceptance", "step_size", "mass_mean", "mass_se", "mass_density_mean",
                          "potential_mean", "potential_se", "local_mass_mean", "local_mass_se",
                          "ess_min"})
    t.columns.emplace_back(col);
  run_cells(c, expand(c), c.threads, t, record, [&](const Cell& cell, std::uint64_t seed) {
    const auto params = cell.params(c);
    std::vector<double> local;
    auto opts = chain_options(c, seed);
    opts.observer = [&](const ChainState& s) {
      local.push_back(observable_local_mass(s.field, c.local_mass_half_width));
    };
    const auto run = run_chain(params, opts);
    const auto lm = stats::batch_means(local);
    const auto& st = run.stats;
    const double ess = min_ess({st.mass, st.potential, lm});
    CellOutput o;
    auto row = cell.key();
    row.insert(row.end(), {st.acceptance_rate, st.final_step_size, st.mass.mean, st.mass.std_error,
                           st.mass.mean / params.length, st.potential.mean, st.potential.std_error,
                           lm.mean, lm.std_error, ess});
    o.add(std::move(row), st.samples > 0 && ess < c.ess_threshold);
    return o;
  });
  record.tables.push_back(std::move(t));
  return record;
}

ResultRecord phase_scan(const ExperimentConfig& c) {
  c.validate();
  if (c.tag != "scan") throw ConfigError("experiment.tag", "phase_scan expects tag 'scan'");
  auto record = new_record(c);
  const double beta_ref = c.reference_beta.value_or(max_beta(c));
  Table t;
  t.name = "cells";
  t.columns = key_columns;
  for (const char* col :
       {"reference_beta", "reference_norm", "distance_mean", "distance_se", "order_parameter",
        "order_parameter_se", "local_mass_mean", "local_mass_se", "mass_density_mean",
        "mass_density_se", "covariance_discrepancy", "covariance_discrepancy_se", "acceptance",
        "ess_min"})
    t.columns.emplace_back(col);
  run_cells(c, expand(c), c.threads, t, record, [&](const Cell& cell, std::uint64_t seed) {
    const auto params = cell.params(c);
    const auto probe = make_concentration_probe(params, c.q, beta_ref);
    const double k = c.ou_window.value_or(params.length / 8.0);
    const Window window = Window::centered(std::min(k, 0.5 * params.length));
    const double wlen = window_length(params.grid(), window);
    const double ou0 = ou_covariance(c.alpha, 0.0);
    std::vector<double> dist, local, density, disc;
    auto opts = chain_options(c, seed);
    opts.observer = [&](const ChainState& s) {
      dist.push_back(probe(s.field).distance);
      local.push_back(observable_local_mass(s.field, c.local_mass_half_width));
      density.push_back(s.mass / params.length);
      disc.push_back(lp_integral(s.field, 2.0, window) / wlen - ou0);
    };
    const auto run = run_chain(params, opts);
    const auto d = stats::batch_means(dist);
    const auto lm = stats::batch_means(local);
    const auto md = stats::batch_means(density);
    const auto cd = stats::batch_means(disc);
    const double norm = probe.reference_norm();
    const double ess = min_ess({d, lm, md, cd});
    CellOutput o;
    auto row = cell.key();
    row.insert(row.end(), {beta_ref, norm, d.mean, d.std_error, 1.0 - d.mean / norm, d.std_error / norm,
                           lm.mean, lm.std_error, md.mean, md.std_error, cd.mean, cd.std_error,
                           run.stats.acceptance_rate, ess});
    o.add(std::move(row), run.stats.samples > 0 && ess < c.ess_threshold);
    return o;
  });
  record.tables.push_back(std::move(t));
  return record;
}

ResultRecord supercritical_concentration(const ExperimentConfig& c) {
  c.validate();
  if (c.tag != "concentration")
    throw ConfigError("experiment.tag", "supercritical_concentration expects tag 'concentration'");
  auto record = new_record(c);
  const double control_ref = c.reference_beta.value_or(max_beta(c));
  Table t;
  t.name = "cells";
  t.columns = key_columns;
  for (const char* col : {"lambda", "reference_beta", "reference_norm", "distance_mean",
                          "distance_se", "distance_q10", "distance_q50", "distance_q90"})
    t.columns.emplace_back(col);
  for (double d : c.deltas) {
    t.columns.push_back("inside_" + fmt(d));
    t.columns.push_back("inside_" + fmt(d) + "_se");
  }
  t.columns.emplace_back("acceptance");
  t.columns.emplace_back("ess_min");
  run_cells(c, expand(c), c.threads, t, record, [&](const Cell& cell, std::uint64_t seed) {
    const auto params = cell.params(c);
    const double ref = params.beta > 0.0 ? c.reference_beta.value_or(params.beta) : control_ref;
    const auto probe = make_concentration_probe(params, c.q, ref);
    std::vector<double> dist;
    auto opts = chain_options(c, seed);
    opts.observer = [&](const ChainState& s) { dist.push_back(probe(s.field).distance); };
    const auto run = run_chain(params, opts);
    const auto d = stats::batch_means(dist);
    auto quantile = [&](double f) {
      if (dist.empty()) return nan;
      auto v = dist;
      const auto k = static_cast<std::size_t>(std::floor(f * static_cast<double>(v.size() - 1)));
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
      return v[k];
    };
    CellOutput o;
    auto row = cell.key();
    row.insert(row.end(), {probe.lambda(), ref, probe.reference_norm(), d.mean, d.std_error,
                           quantile(0.1), quantile(0.5), quantile(0.9)});
    double ess = d.ess;
    for (double delta : c.deltas) {
      std::vector<double> inside(dist.size());
      for (std::size_t i = 0; i < dist.size(); ++i) inside[i] = dist[i] < delta ? 1.0 : 0.0;
      const auto f = stats::batch_means(inside);
      row.push_back(f.mean);
      row.push_back(f.std_error);
    }
    row.push_back(run.stats.acceptance_rate);
    row.push_back(ess);
    o.add(std::move(row), run.stats.samples > 0 && ess < c.ess_threshold);
    return o;
  });
  record.tables.push_back(std::move(t));
  return record;
}

ResultRecord ou_limit_test(const ExperimentConfig& c) {
  c.validate();
  if (c.tag != "ou") throw ConfigError("experiment.tag", "ou_limit_test expects tag 'ou'");
  auto record = new_record(c);
  Table t;
  t.name = "cells";
  t.columns = key_columns;
  for (const char* col : {"window", "lag", "covariance_mean", "covariance_se", "target",
                          "relative_error", "torus_target", "pseudo_re", "pseudo_re_se", "pseudo_im",
                          "pseudo_im_se", "acceptance", "ess_min"})
    t.columns.emplace_back(col);
  run_cells(c, expand(c), c.threads, t, record, [&](const Cell& cell, std::uint64_t seed) {
    const auto params = cell.params(c);
    const auto grid = params.grid();
    const double k = std::min(c.ou_window.value_or(params.length / 8.0), 0.5 * params.length);
    const std::size_t lo = grid.snap(-k), hi = grid.snap(k);
    detail::require(hi > lo, "ou window covers no grid points");
    std::vector<std::size_t> shifts;
    for (double z : c.lags) {
      const auto s = static_cast<long long>(std::llround(std::abs(z) / grid.dx()));
      shifts.push_back(static_cast<std::size_t>(s) % grid.size());
    }
    const std::size_t nl = shifts.size();
    std::vector<std::vector<double>> cov(nl), pre(nl), pim(nl);
    auto opts = chain_options(c, seed);
    opts.observer = [&](const ChainState& s) {
      for (std::size_t l = 0; l < nl; ++l) {
        const auto m = lag_moments(s.field, lo, hi, shifts[l]);
        cov[l].push_back(m.covariance.real());
        pre[l].push_back(m.pseudo.real());
        pim[l].push_back(m.pseudo.imag());
      }
    };
    const auto run = run_chain(params, opts);
    CellOutput o;
    for (std::size_t l = 0; l < nl; ++l) {
      const double z = static_cast<double>(shifts[l]) * grid.dx();
      const auto cv = stats::batch_means(cov[l]);
      const auto pr = stats::batch_means(pre[l]);
      const auto pi = stats::batch_means(pim[l]);
      const double target = ou_covariance(c.alpha, z);
      const double ess = min_ess({cv, pr, pi});
      auto row = cell.key();
      row.insert(row.end(), {k, z, cv.mean, cv.std_error, target, std::abs(cv.mean - target) / target,
                             covariance_function(c.alpha, params.length, params.points, z), pr.mean,
                             pr.std_error, pi.mean, pi.std_error, run.stats.acceptance_rate, ess});
      o.add(std::move(row), run.stats.samples > 0 && ess < c.ess_threshold);
    }
    return o;
  });
  record.tables.push_back(std::move(t));
  return record;
}

ResultRecord log_z_experiment(const ExperimentConfig& c) {
  c.validate();
  if (c.tag != "logz") throw ConfigError("experiment.tag", "log_z_experiment expects tag 'logz'");
  auto record = new_record(c);
  Table t;
  t.name = "cells";
  t.columns = key_columns;
  for (const char* col :
       {"derivative_mean", "derivative_se", "derivative_ess", "log_z", "log_z_error", "log_z_tilde",
        "log_z_tilde_error", "anchor", "anchor_error", "bound", "bound_se", "bound_penalty",
        "bound_expectation", "drift_energy", "drift_energy_target", "acceptance"})
    t.columns.emplace_back(col);

  // One cell per (L, gamma); the beta grid is integrated inside the cell.
  std::vector<Cell> cells;
  for (std::size_t li = 0; li < c.lengths.size(); ++li)
    for (double g : c.gammas) cells.push_back({0.0, c.lengths[li], g, c.points_for(li)});
  const std::size_t inner = cells.size() == 1 ? c.threads : 1;
  const std::size_t outer = cells.size() == 1 ? 1 : c.threads;

  run_cells(c, cells, outer, t, record, [&](const Cell& cell, std::uint64_t seed) {
    const auto params = cell.params(c);
    ThermoOptions opts;
    opts.chain = chain_options(c, 0);
    opts.seed = derive_seed(seed, 0);
    opts.anchor_samples = c.anchor_samples;
    opts.threads = inner;
    opts.ess_threshold = c.ess_threshold;
    const auto thermo = log_Z_thermo(params, c.betas, opts);

    CellOutput o;
    for (std::size_t i = 0; i < thermo.points.size(); ++i) {
      const auto& pt = thermo.points[i];
      GibbsParams at = params;
      at.beta = pt.beta;
      double bound = 0.0, bound_se = 0.0, penalty = 0.0, expectation = 0.0;
      double energy = nan, energy_target = nan;
      if (pt.beta > 0.0) {
        try {
          const Field w = soliton_drift(at, default_drift_scale(at), DriftProfile{c.drift_beta, c.drift_mass});
          RandomStream rng(derive_seed(seed, i + 1));
          const auto b = bd_lower_bound(at, w, c.drift_samples, rng);
          bound = b.lower_bound;
          bound_se = b.std_error;
          penalty = b.penalty;
          expectation = b.expectation;
          const auto e = drift_energy(at, w);
          energy = e.value;
          energy_target = e.target;
        } catch (const InvalidArgument& e) {
          bound = bound_se = penalty = expectation = nan;
          o.warnings.push_back("L=" + fmt(params.length) + " beta=" + fmt(pt.beta) + ": " + e.what());
        }
      }
      std::vector<double> row{pt.beta, params.length, params.gamma, static_cast<double>(params.points),
                              pt.derivative.mean, pt.derivative.std_error, pt.derivative.ess, pt.log_z,
                              pt.log_z_error, thermo.log_z_tilde(i), thermo.log_z_tilde_error(i),
                              thermo.anchor, thermo.anchor_error, bound, bound_se, penalty, expectation,
                              energy, energy_target, pt.acceptance};
      o.add(std::move(row), pt.tainted);
    }
    return o;
  });
  record.tables.push_back(std::move(t));
  return record;
}

ResultRecord ld_tail_experiment(const ExperimentConfig& c) {
  c.validate();
  if (c.tag != "tail") throw ConfigError("experiment.tag", "ld_tail_experiment expects tag 'tail'");
  auto record = new_record(c);
  Table tail;
  tail.name = "tail";
  tail.columns = {"length", "points", "interval", "threshold", "mass_deviation", "exceedances",
                  "tail_probability", "log_tail"};
  Table fit;
  fit.name = "fit";
  fit.columns = {"length", "points", "interval", "slope", "slope_se", "intercept", "residual_rms",
                 "points_used"};

  struct TailCell {
    double length, interval;
    std::size_t points;
  };
  std::vector<TailCell> cells;
  for (std::size_t li = 0; li < c.lengths.size(); ++li)
    for (double iv : c.intervals) cells.push_back({c.lengths[li], iv, c.points_for(li)});

  struct Out {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> status;
    std::vector<double> fit;
    std::string fit_status = "ok";
    std::vector<std::string> warnings;
  };
  std::vector<Out> out(cells.size());
  parallel_for(cells.size(), c.threads, [&](std::size_t i) {
    const auto& cell = cells[i];
    Out& o = out[i];
    const TorusGrid grid(cell.length, cell.points);
    RandomStream rng(derive_seed(c.seed, i));
    const auto dev = mass_tail_samples(grid, c.alpha, Window::centered(0.5 * cell.interval), c.tail_samples, rng);
    const double ilen = window_length(grid, Window::centered(0.5 * cell.interval));
    std::vector<double> xs, ys;
    for (double x : c.thresholds) {
      const double m = x * std::sqrt(ilen);
      const auto hits = static_cast<std::size_t>(std::count_if(dev.begin(), dev.end(), [&](double d) { return d > m; }));
      const double prob = static_cast<double>(hits) / static_cast<double>(dev.size());
      const double lt = hits > 0 ? std::log(prob) : -std::numeric_limits<double>::infinity();
      o.rows.push_back({cell.length, static_cast<double>(cell.points), cell.interval, x, m,
                        static_cast<double>(hits), prob, lt});
      if (hits < c.min_exceedances) {
        o.status.push_back("dropped");
        o.warnings.push_back("L=" + fmt(cell.length) + " |I|=" + fmt(cell.interval) + ": threshold " + fmt(x) +
                             " has " + std::to_string(hits) + " exceedances, dropped from the fit");
      } else {
        o.status.push_back("ok");
        xs.push_back(x);
        ys.push_back(lt);
      }
    }
    o.fit = {cell.length, static_cast<double>(cell.points), cell.interval, nan, nan, nan, nan,
             static_cast<double>(xs.size())};
    try {
      const auto f = stats::fit_line(xs, ys);
      o.fit[3] = f.slope;
      o.fit[4] = f.slope_std_error;
      o.fit[5] = f.intercept;
      o.fit[6] = f.residual_rms;
    } catch (const InvalidArgument&) {
      o.fit_status = "failed: degenerate fit, fewer than two usable thresholds";
    }
  });
  for (auto& o : out) {
    for (std::size_t k = 0; k < o.rows.size(); ++k) tail.add_row(std::move(o.rows[k]), o.status[k]);
    fit.add_row(std::move(o.fit), o.fit_status);
    if (o.fit_status != "ok") record.failed = true;
    for (auto& w : o.warnings) record.warnings.push_back(std::move(w));
  }
  record.tables.push_back(std::move(tail));
  record.tables.push_back(std::move(fit));
  return record;
}

ResultRecord run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.tag == "sample") return sample_experiment(config);
  if (config.tag == "scan") return phase_scan(config);
  if (config.tag == "concentration") return supercritical_concentration(config);
  if (config.tag == "ou") return ou_limit_test(config);
  if (config.tag == "logz") return log_z_experiment(config);
  return ld_tail_experiment(config);
}

}  // namespace nlsgibbs
