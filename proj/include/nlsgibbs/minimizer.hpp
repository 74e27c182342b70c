#pragma once

// Mass-constrained minimisation of E[u] = -(beta/p) int |u|^p + (1/2) int |u'|^2.
//
// A(beta, N) is computed on a line grid, B(beta, N) on a torus with the mean
// removed every step. Both use gradient descent on the sphere ||u||^2 = N
// preconditioned by (-d^2/dx^2 + c)^{-1}, with a Barzilai-Borwein step and
// monotone backtracking, so the energy sequence never increases.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nlsgibbs/error.hpp"
#include "nlsgibbs/line_grid.hpp"
#include "nlsgibbs/soliton.hpp"
#include "nlsgibbs/torus_field.hpp"

namespace nlsgibbs {

struct SolverOptions {
  double gradient_tolerance = 1e-8;  // L^2 norm of the tangential gradient
  std::size_t max_iterations = 100000;
  std::size_t recenter_every = 100;
  /// Line only. Close the grid with the exponential tail exp(-sqrt(lambda) |x|)
  /// instead of zero boundary values; lambda is taken from a first pass with
  /// zero boundary values and refined until it settles.
  bool decay_tail = true;
  bool record_trace = false;
  double min_shift = 1e-3;  // lower bound on the preconditioner shift c
  bool throw_on_failure = true;
};

struct MinimizationResult {
  SolitonProfile profile;
  double energy = 0.0;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<double> energy_trace;  // per accepted iterate of the last pass
  std::vector<double> mass_trace;
};

class SolverFailure : public ConvergenceError {
 public:
  explicit SolverFailure(MinimizationResult last)
      : ConvergenceError("minimizer did not converge"), last_(std::move(last)) {}
  const MinimizationResult& last_iterate() const noexcept { return last_; }

 private:
  MinimizationResult last_;
};

/// Documented width heuristic: 20 / sqrt(lambda) with lambda from the closed
/// form. Not enforced.
double recommended_half_width(double p, double beta, double mass);

MinimizationResult minimize_A(double p, double beta, double mass, double half_width, std::size_t n,
                              const SolverOptions& options = {});

/// Profile returned on LineGrid(L/2, n), i.e. on the torus nodes.
MinimizationResult minimize_B(double p, double beta, double mass, const TorusGrid& grid,
                              const SolverOptions& options = {});

}  // namespace nlsgibbs
