#include "nlsgibbs/minimizer.hpp"

#include <algorithm>
#include <cmath>

#include "nlsgibbs/energy.hpp"

namespace nlsgibbs {

namespace {

void validate(double p, double beta, double mass) {
  if (!(p > 2.0)) throw InvalidArgument("minimize: p must exceed 2");
  if (!(p < 6.0)) throw InvalidArgument("minimize: p >= 6 is unbounded below");
  if (!(beta >= 0.0)) throw InvalidArgument("minimize: beta must be nonnegative");
  if (!(mass > 0.0)) throw InvalidArgument("minimize: mass must be positive");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

void normalise(const EnergyFunctional& ef, std::vector<double>& u, double mass) {
  ef.project(u);
  const double s = std::sqrt(mass / ef.mass(u));
  for (auto& v : u) v *= s;
}

// Moves the largest |u_j| to the centre node. Values entering from outside
// the grid come from the tail (or are zero); on the torus the shift is cyclic.
std::vector<double> recentred(const EnergyFunctional& ef, std::span<const double> u) {
  const std::size_t n = u.size();
  std::size_t jmax = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs(u[j]) > std::abs(u[jmax])) jmax = j;
  }
  const auto shift = static_cast<std::ptrdiff_t>(jmax) - static_cast<std::ptrdiff_t>(n / 2);
  std::vector<double> out(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t j = 0; j < sn; ++j) {
    std::ptrdiff_t src = j + shift;
    if (ef.periodic()) {
      out[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(((src % sn) + sn) % sn)];
    } else if (src >= 0 && src < sn) {
      out[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(src)];
    } else if (ef.tail_decay() > 0.0) {
      const double h = ef.line_grid().h();
      const double edge = src < 0 ? u.front() : u.back();
      const double dist = src < 0 ? static_cast<double>(-src) : static_cast<double>(src - sn + 1);
      out[static_cast<std::size_t>(j)] = edge * std::exp(-ef.tail_decay() * dist * h);
    }
  }
  return out;
}

struct Pass {
  std::vector<double> u;
  double energy = 0.0;
  double gradient_norm = 0.0;
  double multiplier = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace, mass_trace;
};

Pass descend(const EnergyFunctional& ef, std::vector<double> u, double mass, const SolverOptions& opt,
             double tolerance) {
  const std::size_t n = u.size();
  const auto w = ef.mass_weights();
  normalise(ef, u, mass);

  Pass out;
  double energy = ef.energy(u);
  if (opt.record_trace) {
    out.energy_trace.push_back(energy);
    out.mass_trace.push_back(ef.mass(u));
  }

  std::vector<double> g(n), wu(n), pg(n), pu(n), d(n), trial(n), d_prev, u_prev;
  double tau = 1.0;
  double mu = 0.0, gnorm = 0.0;
  std::size_t it = 0;
  for (;; ++it) {
    ef.dual_gradient(u, g);
    if (ef.mean_zero()) ef.project(g);
    mu = dot(u, g) / mass;
    gnorm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      wu[j] = w[j] * u[j];
      const double r = g[j] - mu * wu[j];
      gnorm += r * r / w[j];
    }
    gnorm = std::sqrt(gnorm);
    if (gnorm < tolerance) {
      out.converged = true;
      break;
    }
    if (it >= opt.max_iterations) break;

    const double shift = std::max(-mu, opt.min_shift);
    ef.solve_shifted(g, shift, pg);
    ef.solve_shifted(wu, shift, pu);
    const double coef = dot(wu, pg) / dot(wu, pu);
    for (std::size_t j = 0; j < n; ++j) d[j] = pg[j] - coef * pu[j];

    if (!d_prev.empty()) {
      // Barzilai-Borwein on the preconditioned direction
      double sy = 0.0, yy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double s = u[j] - u_prev[j];
        const double y = d_prev[j] - d[j];
        sy += w[j] * s * y;
        yy += w[j] * y * y;
      }
      tau = (sy > 0.0 && yy > 0.0) ? std::clamp(sy / yy, 0.05, 20.0) : 1.0;
    }

    bool accepted = false;
    double e_trial = energy;
    for (int k = 0; k < 60; ++k) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = u[j] - tau * d[j];
      normalise(ef, trial, mass);
      e_trial = ef.energy(trial);
      if (e_trial <= energy + 1e-12 * std::abs(energy)) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;  // stalled: no descent at working precision

    u_prev = u;
    d_prev = d;
    u.swap(trial);
    energy = e_trial;

    if (opt.recenter_every > 0 && (it + 1) % opt.recenter_every == 0) {
      auto c = recentred(ef, u);
      normalise(ef, c, mass);
      const double ec = ef.energy(c);
      if (ec <= energy) {
        u.swap(c);
        energy = ec;
        d_prev.clear();
        u_prev.clear();
        tau = 1.0;
      }
    }
    if (opt.record_trace) {
      out.energy_trace.push_back(energy);
      out.mass_trace.push_back(ef.mass(u));
    }
  }
  out.u = std::move(u);
  out.energy = energy;
  out.gradient_norm = gnorm;
  out.multiplier = mu;
  out.iterations = it;
  return out;
}

std::vector<double> gaussian_bump(const std::vector<double>& x, double width) {
  std::vector<double> u(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) u[j] = std::exp(-0.5 * x[j] * x[j] / (width * width));
  return u;
}

MinimizationResult finish(const EnergyFunctional& ef, Pass pass, const LineGrid& grid, double p,
                          double beta, const SolverOptions& opt) {
  // Fix the global sign so the profile is nonnegative at its peak.
  const auto peak = std::max_element(pass.u.begin(), pass.u.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (peak != pass.u.end() && *peak < 0.0) {
    for (auto& v : pass.u) v = -v;
  }
  MinimizationResult r;
  r.profile.p = p;
  r.profile.beta = beta;
  r.profile.grid = grid;
  r.profile.second_derivative = ef.second_derivative(pass.u);
  r.profile.mass = ef.mass(pass.u);
  r.profile.energy = ef.energy(pass.u);
  r.profile.lagrange_multiplier = pass.multiplier;
  r.profile.tail_decay = ef.periodic() ? 0.0 : ef.tail_decay();
  r.profile.values = std::move(pass.u);
  r.energy = r.profile.energy;
  r.iterations = pass.iterations;
  r.gradient_norm = pass.gradient_norm;
  r.converged = pass.converged;
  r.energy_trace = std::move(pass.energy_trace);
  r.mass_trace = std::move(pass.mass_trace);
  if (!r.converged && opt.throw_on_failure) throw SolverFailure(std::move(r));
  return r;
}

MinimizationResult zero_result(double p, const LineGrid& grid) {
  MinimizationResult r;
  r.profile.p = p;
  r.profile.grid = grid;
  r.profile.values.assign(grid.size(), 0.0);
  r.profile.second_derivative.assign(grid.size(), 0.0);
  r.converged = true;
  return r;
}

}  // namespace

double recommended_half_width(double p, double beta, double mass) {
  return 20.0 / std::sqrt(closed_form_decay_rate(p, beta, mass));
}

MinimizationResult minimize_A(double p, double beta, double mass, double half_width, std::size_t n,
                              const SolverOptions& options) {
  validate(p, beta, mass);
  const LineGrid grid(half_width, n);
  // beta = 0: E >= 0 with infimum 0 over mass <= N, attained by u = 0.
  if (beta == 0.0) return zero_result(p, grid);

  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = grid.x(j);
  const double width = std::min(1.0 / std::sqrt(closed_form_decay_rate(p, beta, mass)), 0.25 * half_width);

  auto ef = EnergyFunctional::on_line(p, beta, grid, 0.0);
  if (!options.decay_tail) {
    Pass pass = descend(ef, gaussian_bump(x, width), mass, options, options.gradient_tolerance);
    return finish(ef, std::move(pass), grid, p, beta, options);
  }

  SolverOptions quiet = options;
  quiet.record_trace = false;
  Pass pass = descend(ef, gaussian_bump(x, width), mass, quiet, std::max(options.gradient_tolerance, 1e-7));
  std::size_t total = pass.iterations;
  double kappa = std::sqrt(std::max(-pass.multiplier, 1e-12));
  for (int round = 0; round < 8; ++round) {
    ef = EnergyFunctional::on_line(p, beta, grid, kappa);
    const bool last_guess = round == 7;
    pass = descend(ef, std::move(pass.u), mass, options, options.gradient_tolerance);
    total += pass.iterations;
    const double next = std::sqrt(std::max(-pass.multiplier, 1e-12));
    const bool settled = std::abs(next - kappa) <= 1e-7 * kappa;
    if (settled || last_guess || !pass.converged) break;
    kappa = next;
  }
  pass.iterations = total;
  return finish(ef, std::move(pass), grid, p, beta, options);
}

MinimizationResult minimize_B(double p, double beta, double mass, const TorusGrid& grid,
                              const SolverOptions& options) {
  validate(p, beta, mass);
  const LineGrid line(0.5 * grid.length(), grid.size());
  if (beta == 0.0) return zero_result(p, line);

  std::vector<double> x(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) x[j] = grid.x(j);
  const double width =
      std::min(1.0 / std::sqrt(closed_form_decay_rate(p, beta, mass)), 0.125 * grid.length());
  const auto ef = EnergyFunctional::on_torus(p, beta, grid, true);
  Pass pass = descend(ef, gaussian_bump(x, width), mass, options, options.gradient_tolerance);
  return finish(ef, std::move(pass), line, p, beta, options);
}

}  // namespace nlsgibbs
