#include "nlsgibbs/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlsgibbs/energy.hpp"
#include "nlsgibbs/error.hpp"

namespace nlsgibbs {

namespace {

void require_subcritical(double p) {
  if (!(p > 2.0 && p < 6.0)) throw InvalidArgument("p must lie in (2, 6)");
}

}  // namespace

// --- SolitonProfile ---------------------------------------------------------

double SolitonProfile::evaluate(double x) const noexcept {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  const double h = grid.h();
  if (x < grid.left()) {
    return tail_decay > 0.0 ? values.front() * std::exp(-tail_decay * (grid.left() - x)) : 0.0;
  }
  if (x > grid.right()) {
    return tail_decay > 0.0 ? values.back() * std::exp(-tail_decay * (x - grid.right())) : 0.0;
  }
  const double t = (x - grid.left()) / h;
  auto j = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n) - 4);
  const double s = t - static_cast<double>(j);
  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b != a) l *= (s - b) / static_cast<double>(a - b);
    }
    out += l * values[static_cast<std::size_t>(j + a)];
  }
  return out;
}

double SolitonProfile::lp_integral(double q) const {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), q);
  s *= grid.h();
  if (tail_decay > 0.0 && !values.empty()) {
    // trapezoid ends plus the exponential continuation
    const double ends = std::pow(std::abs(values.front()), q) + std::pow(std::abs(values.back()), q);
    s += ends * (1.0 / (q * tail_decay) - 0.5 * grid.h());
  }
  return s;
}

double SolitonProfile::lp_norm(double q) const { return std::pow(lp_integral(q), 1.0 / q); }

double SolitonProfile::euler_lagrange_residual() const {
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double q = values[j];
    const double r = -beta * std::pow(std::abs(q), p - 2.0) * q - second_derivative[j] -
                     lagrange_multiplier * q;
    s += r * r;
  }
  return std::sqrt(s * grid.h());
}

double SolitonProfile::peak() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

// --- closed form ------------------------------------------------------------

SechParameters sech_parameters(double p, double beta, double lambda) {
  require_subcritical(p);
  if (!(beta > 0.0)) throw InvalidArgument("closed form needs beta > 0");
  if (!(lambda > 0.0)) throw InvalidArgument("closed form needs lambda > 0");
  const double m = 2.0 / (p - 2.0);
  return {std::pow(lambda * p / (2.0 * beta), 1.0 / (p - 2.0)), std::sqrt(lambda) / m, m};
}

double sech_power_integral(double nu) {
  if (!(nu > 0.0)) throw InvalidArgument("sech_power_integral: nu must be positive");
  return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(0.5 * nu) - std::lgamma(0.5 * (nu + 1.0)));
}

double closed_form_mass(double p, double beta, double lambda) {
  const auto s = sech_parameters(p, beta, lambda);
  return s.amplitude * s.amplitude / s.rate * sech_power_integral(2.0 * s.power);
}

double closed_form_decay_rate(double p, double beta, double mass) {
  require_subcritical(p);
  if (!(beta > 0.0) || !(mass > 0.0)) throw InvalidArgument("closed form needs beta, N > 0");
  // mass = K lambda^{m - 1/2}
  const double m = 2.0 / (p - 2.0);
  const double k = std::pow(p / (2.0 * beta), m) * m * sech_power_integral(2.0 * m);
  return std::pow(mass / k, 1.0 / (m - 0.5));
}

double closed_form_energy(double p, double beta, double mass) {
  require_subcritical(p);
  if (!(mass >= 0.0)) throw InvalidArgument("mass must be nonnegative");
  if (beta == 0.0 || mass == 0.0) return 0.0;
  const double lambda = closed_form_decay_rate(p, beta, mass);
  return lambda * mass * (p - 6.0) / (2.0 * (p + 2.0));
}

SolitonProfile soliton_closed_form(double p, double beta, double lambda, const LineGrid& grid) {
  const auto s = sech_parameters(p, beta, lambda);
  SolitonProfile q;
  q.p = p;
  q.beta = beta;
  q.grid = grid;
  q.values.resize(grid.size());
  q.second_derivative.resize(grid.size());
  const double m = s.power;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double sech = 1.0 / std::cosh(s.rate * grid.x(j));
    const double sm = std::pow(sech, m);
    q.values[j] = s.amplitude * sm;
    q.second_derivative[j] =
        s.amplitude * s.rate * s.rate * (m * m * sm - m * (m + 1.0) * sm * sech * sech);
  }
  q.mass = closed_form_mass(p, beta, lambda);
  q.energy = lambda * q.mass * (p - 6.0) / (2.0 * (p + 2.0));
  q.lagrange_multiplier = -lambda;
  q.tail_decay = std::sqrt(lambda);
  return q;
}

SolitonProfile ground_state(double p, double beta, double mass, const LineGrid& grid) {
  return soliton_closed_form(p, beta, closed_form_decay_rate(p, beta, mass), grid);
}

MultiplierIdentities multiplier_identities(const SolitonProfile& q) {
  const double lp = q.lp_integral(q.p);
  // int |Q'|^2 = -int Q Q'' on the grid
  double grad2 = 0.0;
  for (std::size_t j = 0; j < q.values.size(); ++j) grad2 -= q.values[j] * q.second_derivative[j];
  grad2 *= q.grid.h();
  return {(grad2 - q.beta * lp) / q.mass, 2.0 * (-(q.beta / q.p) * lp - 0.5 * grad2) / q.mass};
}

// --- GNS --------------------------------------------------------------------

double gns_ratio_closed_form(double p) {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidArgument("p must lie in (2, 6]");
  const double m = 2.0 / (p - 2.0);
  const double j2m = sech_power_integral(2.0 * m);
  const double j2m2 = sech_power_integral(2.0 * m + 2.0);
  const double grad = m * m * (j2m - j2m2);
  return j2m2 / (std::pow(grad, (p - 2.0) / 4.0) * std::pow(j2m, (p + 2.0) / 4.0));
}

namespace {

struct RatioParts {
  double lp, grad2, mass;
  double log_ratio(double p) const {
    return std::log(lp) - 0.25 * (p - 2.0) * std::log(grad2) - 0.25 * (p + 2.0) * std::log(mass);
  }
};

RatioParts ratio_parts(const EnergyFunctional& ef, std::span<const double> u) {
  return {ef.potential(u), 2.0 * ef.kinetic(u), ef.mass(u)};
}

}  // namespace

double weinstein_ratio(double p, std::span<const double> u, const LineGrid& grid) {
  const auto ef = EnergyFunctional::on_line(p, 0.0, grid);
  return std::exp(ratio_parts(ef, u).log_ratio(p));
}

GnsResult gns_constant(double p, const LineGrid& grid, const GnsOptions& options) {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidArgument("gns_constant: p must lie in (2, 6]");
  const auto ef = EnergyFunctional::on_line(p, 0.0, grid);
  const std::size_t n = grid.size();

  std::vector<double> u(n);
  if (options.initial) {
    if (options.initial->size() != n) throw InvalidArgument("gns_constant: initial profile length");
    u = *options.initial;
  } else {
    // sech^m of width R/16
    const double m = 2.0 / (p - 2.0);
    const double b = 16.0 / grid.half_width();
    for (std::size_t j = 0; j < n; ++j) u[j] = std::pow(1.0 / std::cosh(b * grid.x(j)), m);
  }
  auto normalise = [&](std::vector<double>& v) {
    const double s = 1.0 / std::sqrt(ef.mass(v));
    for (auto& x : v) x *= s;
  };
  normalise(u);

  // W is invariant under dilations, a flat direction along which the
  // discretisation error alone would push the iterate toward the grid scale.
  // The penalty (log(grad2/(mass g0)))^2 pins the scale without moving the
  // maximum; it is invariant under u -> c u like W itself.
  const double g0 = ratio_parts(ef, u).grad2;
  auto objective = [&](const RatioParts& r) {
    const double t = std::log(r.grad2 / (r.mass * g0));
    return r.log_ratio(p) - t * t;
  };

  GnsResult out;
  std::vector<double> g(n), ku(n), d(n), trial(n);
  const auto w = ef.mass_weights();
  double f = objective(ratio_parts(ef, u));
  double tau = 1.0;
  double gnorm = 0.0;
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    const auto parts = ratio_parts(ef, u);
    const double t = std::log(parts.grad2 / (parts.mass * g0));
    ef.dual_gradient(u, ku);  // beta = 0: this is K u
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::abs(u[j]);
      g[j] = p * w[j] * std::pow(a, p - 2.0) * u[j] / parts.lp -
             (0.5 * (p - 2.0) + 4.0 * t) * ku[j] / parts.grad2 -
             (0.5 * (p + 2.0) - 4.0 * t) * w[j] * u[j] / parts.mass;
    }
    const double scale = parts.grad2 / parts.mass;
    ef.solve_shifted(g, scale, d);
    double gd = 0.0;
    for (std::size_t j = 0; j < n; ++j) gd += g[j] * d[j];
    gnorm = std::sqrt(std::max(gd, 0.0) * parts.grad2);
    if (gnorm < options.tolerance) break;

    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = u[j] + tau * parts.grad2 * d[j];
      normalise(trial);
      const double ft = objective(ratio_parts(ef, trial));
      if (ft > f) {
        u.swap(trial);
        f = ft;
        tau *= 1.5;
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;  // no ascent possible at double precision
  }
  out.iterations = it;
  out.ratio = std::exp(ratio_parts(ef, u).log_ratio(p));
  out.constant = std::pow(out.ratio, 1.0 / p);
  out.converged = gnorm < options.tolerance;
  out.maximizer = std::move(u);
  if (!out.converged) throw ConvergenceError("gns_constant: ascent stalled above tolerance");
  return out;
}

double critical_mass_N0(double beta, double c_gns6) {
  if (!(beta > 0.0) || !(c_gns6 > 0.0)) throw InvalidArgument("critical_mass_N0: beta, C must be positive");
  return std::sqrt(3.0 / (beta * c_gns6));
}

double critical_mass_N0_quartic_form(double beta, double c_gns6) {
  if (!(beta > 0.0) || !(c_gns6 > 0.0)) throw InvalidArgument("critical_mass_N0: beta, C must be positive");
  return std::pow(3.0 / (beta * c_gns6), 0.25);
}

// --- scaling ----------------------------------------------------------------

double scaling_transport(double a_in, double p, double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw InvalidArgument("scaling_transport: lambda, mu must be positive");
  (void)p;  // the prefactor does not depend on p; kept for symmetry with the parameter map
  return mu * mu * lambda * lambda * a_in;
}

TransportedParameters transported_parameters(double p, double beta, double mass, double lambda,
                                             double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw InvalidArgument("transported_parameters: lambda, mu must be positive");
  return {std::pow(lambda, -0.5 * (6.0 - p)) * std::pow(mu, p - 2.0) * beta, mass / (mu * mu)};
}

// --- unfolding --------------------------------------------------------------

UnfoldedField unfold_periodic(const Field& f) {
  const auto& grid = f.grid();
  const std::size_t n = grid.size();
  const auto v = f.values();
  double vmax = 0.0;
  for (const auto& z : v) vmax = std::max(vmax, std::abs(z));
  if (!f.is_real(1e-12 * std::max(vmax, 1e-300))) throw InvalidArgument("unfold_periodic: field must be real");
  const double scale = std::sqrt(grid.length() * std::max(mass(f), 1e-300));
  if (std::abs(f.coefficient(0)) * std::sqrt(grid.length()) > 1e-9 * scale && vmax > 0.0) {
    throw InvalidArgument("unfold_periodic: field must have zero mean");
  }

  UnfoldedField out{LineGrid(grid.length(), 2 * n), std::vector<double>(2 * n, 0.0), grid.x(0)};
  if (vmax == 0.0) return out;

  std::size_t j0 = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (v[j].real() * v[(j + 1) % n].real() <= 0.0) {
      j0 = j;
      break;
    }
  }
  if (j0 == n) throw InvalidArgument("unfold_periodic: no sign change found");

  // Locate the zero of the trigonometric interpolant inside the cell.
  const auto spec = f.spectrum();
  const double len = grid.length();
  auto interp = [&](double x) {
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double ph = grid.wavenumber(m) * x;
      s += spec[m].real() * std::cos(ph) - spec[m].imag() * std::sin(ph);
    }
    return s / std::sqrt(len);
  };
  double a = grid.x(j0), b = a + grid.dx();
  double fa = interp(a);
  for (int k = 0; k < 80 && b - a > 1e-15 * len; ++k) {
    const double c = 0.5 * (a + b);
    const double fc = interp(c);
    if ((fa <= 0.0) == (fc <= 0.0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  const double cut = 0.5 * (a + b);
  out.cut_point = cut;

  // g(x) = f(x + L/2 + cut) puts the zero on node 0.
  std::vector<cplx> shifted(spec.begin(), spec.end());
  for (std::size_t m = 0; m < n; ++m) {
    shifted[m] *= std::polar(1.0, grid.wavenumber(m) * (0.5 * len + cut));
  }
  const auto g = values_from_spectrum(grid, shifted);
  for (std::size_t j = 1; j < n; ++j) out.values[n / 2 + j] = g[j].real();
  return out;
}

// --- torus GNS --------------------------------------------------------------

GnsTorusCheck gns_torus_check(const Field& f, double p, double c_gns, double tolerance,
                              double delta) {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidArgument("gns_torus_check: p must lie in (2, 6]");
  const auto& grid = f.grid();
  const double len = grid.length();
  const double cp = std::pow(c_gns, p);
  const cplx mean = f.coefficient(0) / std::sqrt(len);

  double lhs = 0.0, mass_free = 0.0, total_p = 0.0;
  for (const auto& z : f.values()) {
    const double a = std::abs(z - mean);
    lhs += std::pow(a, p);
    mass_free += a * a;
    total_p += std::pow(std::abs(z), p);
  }
  lhs *= grid.dx();
  mass_free *= grid.dx();
  total_p *= grid.dx();
  double grad2 = 0.0;
  const auto spec = f.spectrum();
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double q = grid.wavenumber(m);
    grad2 += q * q * std::norm(spec[m]);
  }
  const double m2 = mass(f);

  GnsTorusCheck out;
  const double rhs = cp * std::pow(mass_free, 0.25 * (p + 2.0)) * std::pow(grad2, 0.25 * (p - 2.0));
  out.slack = rhs - lhs;

  const double mean_lhs = len * std::pow(std::abs(mean), p);
  const double mean_rhs = std::pow(len, 1.0 - 0.5 * p) * std::pow(m2, 0.5 * p);
  out.mean_mode_slack = mean_rhs - mean_lhs;

  bool delta_ok = true;
  if (delta > 0.0) {
    const double c_delta = std::pow(1.0 - std::pow(1.0 + delta, -1.0 / (p - 1.0)), 1.0 - p);
    const double delta_rhs = c_delta * mean_rhs +
                             cp * (1.0 + delta) * std::pow(m2, 0.25 * (p + 2.0)) *
                                 std::pow(grad2, 0.25 * (p - 2.0));
    out.delta_form_slack = delta_rhs - total_p;
    delta_ok = out.delta_form_slack >= -tolerance * delta_rhs;
  }
  const double tiny = 1e-300;
  out.pass = out.slack >= -tolerance * rhs - tiny &&
             out.mean_mode_slack >= -tolerance * mean_rhs - tiny && delta_ok;
  return out;
}

}  // namespace nlsgibbs
