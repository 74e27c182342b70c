#pragma once

// Ground-state profiles Q_p of -Q'' + lambda Q = beta Q^{p-1}, the closed-form
// sech-power family, the optimal Gagliardo-Nirenberg constant and assorted
// identities around them.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nlsgibbs/line_grid.hpp"
#include "nlsgibbs/torus_field.hpp"

namespace nlsgibbs {

/// A real profile on a line grid. Sign convention: the multiplier satisfies
/// -beta Q^{p-1} - Q'' = lagrange_multiplier * Q, so it is negative for a bound
/// state and decay_rate() = -lagrange_multiplier is the positive lambda.
struct SolitonProfile {
  double p = 4.0;
  double beta = 0.0;
  LineGrid grid{1.0, 8};
  std::vector<double> values;
  std::vector<double> second_derivative;
  double mass = 0.0;
  double energy = 0.0;
  double lagrange_multiplier = 0.0;
  /// Beyond the grid the profile continues as Q_end exp(-tail_decay s);
  /// 0 means it is zero outside.
  double tail_decay = 0.0;

  double decay_rate() const noexcept { return -lagrange_multiplier; }
  /// Cubic Lagrange interpolation inside the grid, the tail outside.
  double evaluate(double x) const noexcept;
  /// (int |Q|^q)^{1/q} including the tails.
  double lp_norm(double q) const;
  /// int |Q|^q including the tails.
  double lp_integral(double q) const;
  /// || -beta Q^{p-1} - Q'' - lagrange_multiplier Q ||_{L^2} over the grid.
  double euler_lagrange_residual() const;
  double peak() const noexcept;
};

// Closed form: Q(x) = a sech^m(b x), m = 2/(p-2), b = sqrt(lambda)/m,
// a = (lambda p / (2 beta))^{1/(p-2)}.
struct SechParameters {
  double amplitude;  // a
  double rate;       // b
  double power;      // m
};
SechParameters sech_parameters(double p, double beta, double lambda);

/// int_R sech^nu = sqrt(pi) Gamma(nu/2) / Gamma((nu+1)/2).
double sech_power_integral(double nu);

/// Mass of the closed-form solution at decay rate lambda.
double closed_form_mass(double p, double beta, double lambda);
/// The lambda whose closed-form solution has mass N (2 < p < 6).
double closed_form_decay_rate(double p, double beta, double mass);
/// A(beta, N) = lambda N (p - 6) / (2 (p + 2)) at that lambda; 0 if beta = 0.
double closed_form_energy(double p, double beta, double mass);

/// The explicit solution at decay rate lambda > 0 sampled on `grid`, with
/// analytic mass, energy and second derivative.
SolitonProfile soliton_closed_form(double p, double beta, double lambda, const LineGrid& grid);
/// soliton_closed_form at the lambda giving mass N.
SolitonProfile ground_state(double p, double beta, double mass, const LineGrid& grid);

/// The two multiplier values obtained by pairing the Euler-Lagrange equation
/// with Q (int |Q'|^2 - beta int |Q|^p = mu N) and with Q' integrated
/// (-(beta/p) int |Q|^p - (1/2) int |Q'|^2 = mu N / 2).
struct MultiplierIdentities {
  double from_pairing;
  double from_first_integral;
};
MultiplierIdentities multiplier_identities(const SolitonProfile& profile);

struct GnsOptions {
  // Preconditioned gradient norm of log W. The error in log W is of order its
  // square; round-off puts a floor near 1e-8 on fine grids.
  double tolerance = 1e-6;
  std::size_t max_iterations = 20000;
  std::optional<std::vector<double>> initial;  // defaults to a sech^m bump
};

struct GnsResult {
  double constant = 0.0;   // C
  double ratio = 0.0;      // C^p, the maximal Weinstein ratio
  std::vector<double> maximizer;
  std::size_t iterations = 0;
  bool converged = false;
};

/// W(u) = int|u|^p / ((int|u'|^2)^{(p-2)/4} (int|u|^2)^{(p+2)/4}), discretised
/// as in gns_constant.
double weinstein_ratio(double p, std::span<const double> u, const LineGrid& grid);

/// Preconditioned gradient ascent of log W on the line grid (differences with
/// zero boundary values). Throws ConvergenceError if the iteration stalls
/// above tolerance.
GnsResult gns_constant(double p, const LineGrid& grid, const GnsOptions& options = {});

/// Closed-form C^p from the sech-power extremiser.
double gns_ratio_closed_form(double p);

/// N0 with N0^2 = 3 / (beta C6), where C6 is the sharp constant in
/// int|u|^6 <= C6 (int|u|^2)^2 int|u'|^2.
double critical_mass_N0(double beta, double c_gns6);
/// The variant N0^4 = 3 / (beta C6) obtained from (beta/6) C6 N0^4 = 1/2.
/// Kept only to expose the disagreement between the two normalisations.
double critical_mass_N0_quartic_form(double beta, double c_gns6);

/// A(beta, N) = mu^2 lambda^2 A(beta', N'): returns mu^2 lambda^2 A_in where
/// A_in is the value at the transported parameters.
double scaling_transport(double a_in, double p, double lambda, double mu);
struct TransportedParameters {
  double beta;
  double mass;
};
/// beta' = lambda^{-(6-p)/2} mu^{p-2} beta and N' = mu^{-2} N.
TransportedParameters transported_parameters(double p, double beta, double mass, double lambda,
                                             double mu);

/// Result of cutting a real mean-zero torus field at a zero and laying one
/// period on the line, zero outside.
struct UnfoldedField {
  LineGrid grid;
  std::vector<double> values;
  double cut_point;  // torus coordinate of the zero used for the cut
};
UnfoldedField unfold_periodic(const Field& f);

struct GnsTorusCheck {
  bool pass = false;
  double slack = 0.0;          // rhs - lhs of the mean-free inequality
  double mean_mode_slack = 0.0;
  double delta_form_slack = 0.0;
};
/// Checks int|P f|^p <= C^p (int|P f|^2)^{(p+2)/4} (int|f'|^2)^{(p-2)/4} with
/// P the mean-free projection, the mean-mode bound and, for delta > 0, the
/// split form with constant C_delta = (1 - (1+delta)^{-1/(p-1)})^{1-p}.
/// `tolerance` is relative to the right-hand sides.
GnsTorusCheck gns_torus_check(const Field& f, double p, double c_gns, double tolerance,
                              double delta = 0.5);

}  // namespace nlsgibbs
