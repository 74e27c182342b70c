#include "nlsgibbs/soliton_distance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlsgibbs/error.hpp"
#include "nlsgibbs/kernels.hpp"

namespace nlsgibbs {

namespace {

using std::numbers::pi;

double wrap(double x, double length) {
  x = std::fmod(x + 0.5 * length, length);
  if (x < 0.0) x += length;
  return x - 0.5 * length;
}

std::vector<cplx> sample_profile(const SolitonProfile& profile, const TorusGrid& rescaled) {
  std::vector<cplx> out(rescaled.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = profile.evaluate(rescaled.x(j));
  return out;
}

struct Correlation {
  cplx value, d1, d2;
};

Correlation correlation_at(const TorusGrid& g, std::span<const cplx> d, double s) {
  Correlation c{};
  for (std::size_t m = 0; m < d.size(); ++m) {
    if (d[m] == cplx{}) continue;
    const double q = g.wavenumber(m);
    const cplx t = d[m] * std::polar(1.0, q * s);
    c.value += t;
    c.d1 += cplx(0.0, q) * t;
    c.d2 -= q * q * t;
  }
  return c;
}

}  // namespace

ConcentrationProbe::ConcentrationProbe(const SolitonProfile& profile, const TorusGrid& grid,
                                       double lambda, double q)
    : grid_(grid), rescaled_(grid.length() / lambda, grid.size()), lambda_(lambda), q_(q) {
  if (!(lambda > 0.0)) throw InvalidArgument("soliton_distance: lambda must be positive");
  if (!(q >= 2.0)) throw InvalidArgument("soliton_distance: q must be >= 2");
  profile_values_ = sample_profile(profile, rescaled_);
  profile_spectrum_ = spectrum_from_values(rescaled_, profile_values_);
  const double dy = rescaled_.dx();
  const double l2 = std::sqrt(kernels::sum_abs2(profile_values_) * dy);
  const double lq = std::pow(kernels::sum_abs_pow(profile_values_, q) * dy, 1.0 / q);
  reference_norm_ = std::max(l2, lq);
}

SolitonDistance ConcentrationProbe::operator()(const Field& u) const {
  if (!(u.grid() == grid_)) throw InvalidArgument("soliton_distance: field grid mismatch");
  const std::size_t n = grid_.size();
  const double dy = rescaled_.dx();
  const double len = rescaled_.length();

  // v(y) = L^{-1/2} lambda^{1/2} u(lambda y) sampled on the rescaled nodes.
  const double amp = std::sqrt(lambda_ / grid_.length());
  std::vector<cplx> v(u.values().begin(), u.values().end());
  for (auto& z : v) z *= amp;
  const auto a = spectrum_from_values(rescaled_, v);

  // c(s) = <v(. + s), Q> = sum_k a_k conj(b_k) exp(i q_k s)
  std::vector<cplx> d(n);
  for (std::size_t m = 0; m < n; ++m) d[m] = a[m] * std::conj(profile_spectrum_[m]);
  d[n / 2] = 0.0;  // the Nyquist term has no unambiguous off-grid continuation
  const auto on_grid = values_from_spectrum(rescaled_, d);

  SolitonDistance out;
  double best_s = rescaled_.x(0);
  cplx best_c{};
  double best_f = -1.0;

  // Top local maxima of |c|^2 on the grid, each refined by Newton steps.
  std::vector<std::pair<double, std::size_t>> peaks;
  for (std::size_t j = 0; j < n; ++j) {
    const double f = std::norm(on_grid[j]);
    const double fl = std::norm(on_grid[(j + n - 1) % n]);
    const double fr = std::norm(on_grid[(j + 1) % n]);
    if (f >= fl && f >= fr) peaks.emplace_back(f, j);
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  if (peaks.size() > 3) peaks.resize(3);

  for (const auto& [f0, j] : peaks) {
    const double s0 = rescaled_.x(j);
    double s = s0;
    Correlation c = correlation_at(rescaled_, d, s);
    for (int it = 0; it < 20; ++it) {
      const double f1 = 2.0 * std::real(std::conj(c.value) * c.d1);
      const double f2 = 2.0 * (std::norm(c.d1) + std::real(std::conj(c.value) * c.d2));
      if (!(f2 < 0.0)) break;
      double step = -f1 / f2;
      step = std::clamp(step, -dy, dy);
      const double next = std::clamp(s + step, s0 - dy, s0 + dy);
      const Correlation cn = correlation_at(rescaled_, d, next);
      if (std::norm(cn.value) < std::norm(c.value)) break;
      const bool small = std::abs(next - s) < 1e-13 * std::max(1.0, len);
      s = next;
      c = cn;
      if (small) break;
    }
    const double f = std::norm(c.value);
    if (f > best_f) {
      best_f = f;
      best_s = s;
      best_c = c.value;
    }
  }

  out.phase = best_c == cplx{} ? 0.0 : std::arg(best_c);
  out.shift = wrap(lambda_ * best_s, grid_.length());

  // v(. + s) - e^{i theta} Q on the rescaled grid
  std::vector<cplx> shifted(a);
  for (std::size_t m = 0; m < n; ++m) shifted[m] *= std::polar(1.0, rescaled_.wavenumber(m) * best_s);
  auto w = values_from_spectrum(rescaled_, shifted);
  const cplx rot = std::polar(1.0, out.phase);
  for (std::size_t j = 0; j < n; ++j) w[j] -= rot * profile_values_[j];
  out.l2 = std::sqrt(kernels::sum_abs2(w) * dy);
  out.lq = std::pow(kernels::sum_abs_pow(w, q_) * dy, 1.0 / q_);
  out.distance = std::max(out.l2, out.lq);
  return out;
}

SolitonDistance soliton_distance(const Field& u, const SolitonProfile& profile, double lambda,
                                 double q) {
  return ConcentrationProbe(profile, u.grid(), lambda, q)(u);
}

Field embed_soliton(const SolitonProfile& profile, const TorusGrid& grid, double lambda,
                    double shift, double phase) {
  if (!(lambda > 0.0)) throw InvalidArgument("embed_soliton: lambda must be positive");
  const TorusGrid rescaled(grid.length() / lambda, grid.size());
  auto values = sample_profile(profile, rescaled);
  const double amp = std::sqrt(grid.length() / lambda);
  for (auto& z : values) z *= amp;
  if (shift == 0.0 && phase == 0.0) return Field::from_values(grid, std::move(values));
  // Translate the trigonometric interpolant exactly: u(x - x0).
  auto spec = spectrum_from_values(grid, values);
  const std::size_t nyq = grid.size() / 2;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    if (m != nyq) spec[m] *= std::polar(1.0, phase - grid.wavenumber(m) * shift);
  }
  // Nyquist split evenly between +-k: the translation leaves cos(k x0).
  spec[nyq] *= std::polar(1.0, phase) * std::cos(grid.wavenumber(nyq) * shift);
  return Field::from_spectrum(grid, std::move(spec));
}

}  // namespace nlsgibbs
