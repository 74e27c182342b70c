#include "nlsgibbs/torus_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "nlsgibbs/error.hpp"
#include "nlsgibbs/fft.hpp"
#include "nlsgibbs/kernels.hpp"

namespace nlsgibbs {

using std::numbers::pi;

TorusGrid::TorusGrid(double length, std::size_t n) : length_(length), n_(n), dx_(0.0) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("TorusGrid: length must be positive");
  if (n < 8 || !std::has_single_bit(n)) throw InvalidArgument("TorusGrid: n must be a power of two >= 8");
  dx_ = length / static_cast<double>(n);
}

double TorusGrid::wavenumber(std::size_t m) const noexcept {
  return 2.0 * pi * static_cast<double>(mode(m)) / length_;
}

std::size_t TorusGrid::snap(double x) const noexcept {
  const double t = std::nearbyint((x + 0.5 * length_) / dx_);
  if (!(t > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(t), n_);
}

SpectralWeights::SpectralWeights(const TorusGrid& grid, double a) : alpha(a), sigma(grid.size()) {
  if (!(a > 0.0)) throw InvalidArgument("alpha must be positive");
  const std::size_t n = grid.size();
  for (std::size_t m = 0; m < n; ++m) {
    const double q = grid.wavenumber(m);
    sigma[m] = m == n / 2 ? 0.0 : 1.0 / std::sqrt(alpha + q * q);
  }
}

double SpectralWeights::total_variance() const noexcept {
  double s = 0.0;
  for (double v : sigma) s += v * v;
  return s;
}

std::vector<cplx> values_from_spectrum(const TorusGrid& grid, std::span<const cplx> spectrum) {
  const std::size_t n = grid.size();
  if (spectrum.size() != n) throw InvalidArgument("spectrum length does not match grid");
  // x_j = -L/2 + j dx puts a factor (-1)^k on every mode.
  std::vector<cplx> tmp(spectrum.begin(), spectrum.end());
  for (std::size_t m = 1; m < n; m += 2) tmp[m] = -tmp[m];
  std::vector<cplx> out(n);
  fft::backward(tmp, out);
  const double scale = 1.0 / std::sqrt(grid.length());
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<cplx> spectrum_from_values(const TorusGrid& grid, std::span<const cplx> values) {
  const std::size_t n = grid.size();
  if (values.size() != n) throw InvalidArgument("value length does not match grid");
  std::vector<cplx> out(n);
  fft::forward(values, out);
  const double scale = std::sqrt(grid.length()) / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) out[m] *= (m % 2 == 0) ? scale : -scale;
  return out;
}

Field Field::from_values(const TorusGrid& grid, std::vector<cplx> values) {
  auto spectrum = spectrum_from_values(grid, values);
  return Field(grid, std::move(values), std::move(spectrum));
}

Field Field::from_spectrum(const TorusGrid& grid, std::vector<cplx> spectrum) {
  auto values = values_from_spectrum(grid, spectrum);
  return Field(grid, std::move(values), std::move(spectrum));
}

Field Field::from_consistent_parts(const TorusGrid& grid, std::vector<cplx> values,
                                   std::vector<cplx> spectrum) {
  if (values.size() != grid.size() || spectrum.size() != grid.size()) {
    throw InvalidArgument("Field: representation length does not match grid");
  }
  return Field(grid, std::move(values), std::move(spectrum));
}

Field Field::zero(const TorusGrid& grid) {
  return Field(grid, std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size()));
}

bool Field::is_real(double tol) const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [tol](const cplx& v) { return std::abs(v.imag()) <= tol; });
}

namespace {

struct IndexRange {
  std::size_t begin, end;
};

IndexRange snapped(const TorusGrid& grid, const Window& w) {
  const double half = 0.5 * grid.length();
  if (w.lower > w.upper) throw InvalidArgument("window: lower > upper");
  if (w.lower < -half - 1e-12 * grid.length() || w.upper > half + 1e-12 * grid.length()) {
    throw InvalidArgument("window must lie inside [-L/2, L/2]");
  }
  return {grid.snap(w.lower), grid.snap(w.upper)};
}

}  // namespace

double window_length(const TorusGrid& grid, const Window& window) {
  const auto r = snapped(grid, window);
  const std::size_t inside = r.end - r.begin;
  return static_cast<double>(window.complement ? grid.size() - inside : inside) * grid.dx();
}

Field sample_gff(const TorusGrid& grid, double alpha, RandomStream& rng) {
  return sample_gff(grid, SpectralWeights(grid, alpha), rng);
}

Field sample_gff(const TorusGrid& grid, const SpectralWeights& weights, RandomStream& rng) {
  if (weights.sigma.size() != grid.size()) throw InvalidArgument("weights do not match grid");
  std::vector<cplx> spectrum(grid.size());
  for (auto& c : spectrum) c = rng.complex_normal();
  kernels::scale_by(spectrum, weights.sigma);
  return Field::from_spectrum(grid, std::move(spectrum));
}

double mass(const Field& field) noexcept {
  return kernels::sum_abs2(field.values()) * field.grid().dx();
}

double lp_integral(const Field& field, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_integral: p must be >= 1");
  return kernels::sum_abs_pow(field.values(), p) * field.grid().dx();
}

double lp_integral(const Field& field, double p, const Window& window) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_integral: p must be >= 1");
  const auto r = snapped(field.grid(), window);
  const auto v = field.values();
  double s;
  if (window.complement) {
    s = kernels::sum_abs_pow(v.subspan(0, r.begin), p) + kernels::sum_abs_pow(v.subspan(r.end), p);
  } else {
    s = kernels::sum_abs_pow(v.subspan(r.begin, r.end - r.begin), p);
  }
  return s * field.grid().dx();
}

double sobolev_norm(const Field& field, double alpha, double s) {
  if (!(std::abs(s) <= 2.0)) throw InvalidArgument("sobolev_norm: |s| must be <= 2");
  if (!(alpha > 0.0)) throw InvalidArgument("sobolev_norm: alpha must be positive");
  const auto& grid = field.grid();
  if (s == 0.0) return std::sqrt(kernels::sum_abs2(field.spectrum()));
  std::vector<double> w(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double q = grid.wavenumber(m);
    w[m] = std::pow(alpha + q * q, s);
  }
  return std::sqrt(kernels::weighted_sum_abs2(field.spectrum(), w));
}

double covariance_function(double alpha, double length, std::size_t n, double z) {
  if (!(alpha > 0.0) || !(length > 0.0)) throw InvalidArgument("covariance_function: bad alpha or L");
  if (!(std::abs(z) <= 0.5 * length * (1.0 + 1e-12))) throw InvalidArgument("covariance_function: |z| > L/2");
  // The +-k terms pair into cosines; the sine parts cancel identically.
  double s = 1.0 / alpha;
  const long kmax = static_cast<long>(n / 2) - 1;
  for (long k = 1; k <= kmax; ++k) {
    const double q = 2.0 * pi * static_cast<double>(k) / length;
    s += 2.0 * std::cos(q * z) / (alpha + q * q);
  }
  return s / length;
}

std::vector<double> mass_tail_samples(const TorusGrid& grid, double alpha, const Window& interval,
                                      std::size_t sample_count, RandomStream& rng) {
  if (sample_count < 100) throw InvalidArgument("mass_tail_samples: need at least 100 samples");
  const SpectralWeights weights(grid, alpha);
  const double centre = window_length(grid, interval) / (2.0 * std::sqrt(alpha));
  std::vector<double> out(sample_count);
  for (auto& d : out) {
    const Field phi = sample_gff(grid, weights, rng);
    d = std::abs(lp_integral(phi, 2.0, interval) - centre);
  }
  return out;
}

}  // namespace nlsgibbs
