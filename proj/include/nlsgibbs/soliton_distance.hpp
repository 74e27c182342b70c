#pragma once

// Distance from a torus field to the soliton manifold {e^{i theta} Q(. - x0)}
// after the rescaling v(y) = L^{-1/2} lambda^{1/2} u(lambda y), which lives on
// the torus of length L/lambda with the same number of nodes.

#include "nlsgibbs/soliton.hpp"
#include "nlsgibbs/torus_field.hpp"

namespace nlsgibbs {

struct SolitonDistance {
  double distance = 0.0;  // max of the two norms below
  double l2 = 0.0;
  double lq = 0.0;
  double shift = 0.0;     // x0 in field coordinates
  double phase = 0.0;     // theta in (-pi, pi]
};

/// Precomputes the sampled reference profile for one (grid, lambda) pair so
/// that many fields can be measured cheaply. Thread-safe for concurrent calls.
///
/// The optimal (x0, theta) is the one minimising the L^2 distance: the peak
/// of the FFT cross-correlation |<v(. + s), Q>|, refined off the grid by Newton
/// steps on the trigonometric interpolant of the correlation, with theta its
/// argument. The L^q part is evaluated at that optimum.
class ConcentrationProbe {
 public:
  ConcentrationProbe(const SolitonProfile& profile, const TorusGrid& grid, double lambda,
                     double q = 4.0);

  SolitonDistance operator()(const Field& u) const;

  /// Distance of the zero field: max(||Q||_2, ||Q||_q) on the rescaled grid.
  double reference_norm() const noexcept { return reference_norm_; }
  const TorusGrid& rescaled_grid() const noexcept { return rescaled_; }
  double lambda() const noexcept { return lambda_; }
  double q() const noexcept { return q_; }

 private:
  TorusGrid grid_;
  TorusGrid rescaled_;
  double lambda_;
  double q_;
  std::vector<cplx> profile_values_;
  std::vector<cplx> profile_spectrum_;
  double reference_norm_ = 0.0;
};

SolitonDistance soliton_distance(const Field& u, const SolitonProfile& profile, double lambda,
                                 double q = 4.0);

/// The embedded member L^{1/2} lambda^{-1/2} e^{i theta} Q((x - x0)/lambda),
/// wrapped periodically.
Field embed_soliton(const SolitonProfile& profile, const TorusGrid& grid, double lambda,
                    double shift = 0.0, double phase = 0.0);

}  // namespace nlsgibbs
