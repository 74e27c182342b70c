#pragma once

// E[u] = -(beta/p) int |u|^p + (1/2) int |u'|^2 for real profiles, on a line
// grid (second-order differences) or on the torus (spectral derivative).
//
// Discretely E(u) = -(beta/p) sum_j pw_j |u_j|^p + (1/2) u^T K u and the mass
// is sum_j w_j u_j^2. K, w and pw depend on the domain:
//   line, Dirichlet     zero ghosts just outside the grid, w = pw = h;
//   line, decay tail    beyond each end u continues as u_end exp(-kappa s),
//                       whose mass, gradient and L^p contributions are added
//                       in closed form (trapezoid weights at the ends);
//   torus               K is dx times the spectral -d^2/dx^2, w = pw = dx.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "nlsgibbs/line_grid.hpp"
#include "nlsgibbs/torus_field.hpp"

namespace nlsgibbs {

class EnergyFunctional {
 public:
  static EnergyFunctional on_line(double p, double beta, const LineGrid& grid,
                                  double tail_decay = 0.0);
  static EnergyFunctional on_torus(double p, double beta, const TorusGrid& grid, bool mean_zero);

  double p() const noexcept { return p_; }
  double beta() const noexcept { return beta_; }
  std::size_t size() const noexcept { return w_.size(); }
  bool periodic() const noexcept { return std::holds_alternative<TorusGrid>(grid_); }
  bool mean_zero() const noexcept { return mean_zero_; }
  double tail_decay() const noexcept { return tail_decay_; }
  const LineGrid& line_grid() const { return std::get<LineGrid>(grid_); }
  const TorusGrid& torus_grid() const { return std::get<TorusGrid>(grid_); }

  double energy(std::span<const double> u) const;
  /// (1/2) int |u'|^2
  double kinetic(std::span<const double> u) const;
  /// int |u|^p
  double potential(std::span<const double> u) const;
  double mass(std::span<const double> u) const;
  double inner(std::span<const double> a, std::span<const double> b) const;

  /// g_j = dE/du_j (the Euclidean gradient of the discrete energy).
  void dual_gradient(std::span<const double> u, std::span<double> g) const;
  /// The L^2 gradient -beta |u|^{p-2} u - u'' (dual gradient divided by w).
  std::vector<double> l2_gradient(std::span<const double> u) const;
  /// Discrete u'', consistent with the kinetic term.
  std::vector<double> second_derivative(std::span<const double> u) const;

  /// Solves (K + shift W) x = rhs. On a mean-zero torus the constant mode of
  /// the result is set to zero; otherwise shift must be positive.
  void solve_shifted(std::span<const double> rhs, double shift, std::span<double> x) const;

  /// Removes the mean on a mean-zero torus, no-op otherwise.
  void project(std::span<double> u) const;

  std::span<const double> mass_weights() const noexcept { return w_; }

 private:
  EnergyFunctional() = default;
  void apply_kinetic(std::span<const double> u, std::span<double> out) const;

  double p_ = 4.0;
  double beta_ = 0.0;
  std::variant<LineGrid, TorusGrid> grid_{LineGrid(1.0, 8)};
  bool mean_zero_ = false;
  double tail_decay_ = 0.0;
  std::vector<double> w_;   // mass weights
  std::vector<double> pw_;  // L^p weights
  double diag_ = 0.0;       // line: interior diagonal of K
  double end_diag_ = 0.0;   // line: end diagonal of K
  double off_ = 0.0;        // line: off-diagonal of K
  std::vector<double> q2_;  // torus: squared wavenumbers in FFT order
};

}  // namespace nlsgibbs
