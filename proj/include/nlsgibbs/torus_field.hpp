#pragma once

// Complex fields on the torus [-L/2, L/2) sampled at x_j = -L/2 + j dx, and
// exact spectral sampling of the truncated Gaussian free field.
//
// Fourier normalisation: u(x) = L^{-1/2} sum_k c_k exp(2 pi i k x / L), so that
// sum_j |u_j|^2 dx = sum_k |c_k|^2. Spectra are stored in FFT order: slot m
// holds mode k = m for m < n/2 and k = m - n otherwise.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nlsgibbs/rng.hpp"

namespace nlsgibbs {

using cplx = std::complex<double>;

class TorusGrid {
 public:
  /// n >= 8 and a power of two, L > 0.
  TorusGrid(double length, std::size_t n);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t j) const noexcept { return -0.5 * length_ + static_cast<double>(j) * dx_; }

  /// Mode number k stored in FFT slot m.
  int mode(std::size_t m) const noexcept {
    return m < n_ / 2 ? static_cast<int>(m) : static_cast<int>(m) - static_cast<int>(n_);
  }
  /// FFT slot of mode k, |k| <= n/2.
  std::size_t slot(int k) const noexcept {
    return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<int>(n_));
  }
  /// 2 pi k / L for the mode in slot m.
  double wavenumber(std::size_t m) const noexcept;

  /// Grid index nearest to x, x in [-L/2, L/2]; may return n for x = L/2.
  std::size_t snap(double x) const noexcept;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  double length_;
  std::size_t n_;
  double dx_;
};

/// Per-mode standard deviations of the truncated GFF in FFT order. The
/// Nyquist slot carries 0: only |k| < n/2 is sampled.
struct SpectralWeights {
  double alpha = 1.0;
  std::vector<double> sigma;

  SpectralWeights(const TorusGrid& grid, double alpha);
  /// sum_{|k|<n/2} sigma_k^2, the exact expected mass.
  double total_variance() const noexcept;
};

class Field {
 public:
  static Field from_values(const TorusGrid& grid, std::vector<cplx> values);
  static Field from_spectrum(const TorusGrid& grid, std::vector<cplx> spectrum);
  /// Both representations supplied by a caller that already keeps them in
  /// sync (used by the sampler's linear updates). No check is made.
  static Field from_consistent_parts(const TorusGrid& grid, std::vector<cplx> values,
                                     std::vector<cplx> spectrum);
  static Field zero(const TorusGrid& grid);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  std::span<const cplx> spectrum() const noexcept { return spectrum_; }
  cplx coefficient(int k) const noexcept { return spectrum_[grid_.slot(k)]; }

  bool is_real(double tol = 0.0) const noexcept;

 private:
  Field(const TorusGrid& grid, std::vector<cplx> values, std::vector<cplx> spectrum)
      : grid_(grid), values_(std::move(values)), spectrum_(std::move(spectrum)) {}

  TorusGrid grid_;
  std::vector<cplx> values_;
  std::vector<cplx> spectrum_;
};

/// Raw transforms with the normalisation above.
std::vector<cplx> values_from_spectrum(const TorusGrid& grid, std::span<const cplx> spectrum);
std::vector<cplx> spectrum_from_values(const TorusGrid& grid, std::span<const cplx> values);

/// Subinterval [lower, upper] of the torus, or its complement. Endpoints snap
/// to the nearest grid points and the covered index range is half-open, so a
/// window and its complement partition the grid exactly.
struct Window {
  double lower = 0.0;
  double upper = 0.0;
  bool complement = false;

  static Window centered(double half_width) { return {-half_width, half_width, false}; }
  Window complemented() const { return {lower, upper, !complement}; }
};

/// Length covered by the snapped window.
double window_length(const TorusGrid& grid, const Window& window);

Field sample_gff(const TorusGrid& grid, double alpha, RandomStream& rng);
Field sample_gff(const TorusGrid& grid, const SpectralWeights& weights, RandomStream& rng);

double mass(const Field& field) noexcept;
double lp_integral(const Field& field, double p);
double lp_integral(const Field& field, double p, const Window& window);
/// (sum_k (alpha + 4 pi^2 (k/L)^2)^s |c_k|^2)^{1/2}, |s| <= 2.
double sobolev_norm(const Field& field, double alpha, double s);

/// K(z) = (1/L) sum_{|k|<n/2} exp(2 pi i k z/L) / (alpha + 4 pi^2 (k/L)^2).
double covariance_function(double alpha, double length, std::size_t n, double z);

/// |int_I |phi_i|^2 - |I|/(2 sqrt(alpha))| for independent GFF draws phi_i,
/// with |I| the snapped window length.
std::vector<double> mass_tail_samples(const TorusGrid& grid, double alpha, const Window& interval,
                                      std::size_t sample_count, RandomStream& rng);

}  // namespace nlsgibbs
