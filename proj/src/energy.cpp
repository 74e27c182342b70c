#include "nlsgibbs/energy.hpp"

#include <cmath>
#include <numeric>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs {

namespace {

void check_exponent(double p, double beta) {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidArgument("energy: p must lie in (2, 6]");
  if (!(beta >= 0.0)) throw InvalidArgument("energy: beta must be nonnegative");
}

std::vector<cplx> to_complex(std::span<const double> u) { return {u.begin(), u.end()}; }

}  // namespace

EnergyFunctional EnergyFunctional::on_line(double p, double beta, const LineGrid& grid,
                                           double tail_decay) {
  check_exponent(p, beta);
  if (!(tail_decay >= 0.0)) throw InvalidArgument("energy: tail decay must be nonnegative");
  EnergyFunctional e;
  e.p_ = p;
  e.beta_ = beta;
  e.grid_ = grid;
  e.tail_decay_ = tail_decay;
  const std::size_t n = grid.size();
  const double h = grid.h();
  e.w_.assign(n, h);
  e.pw_.assign(n, h);
  e.diag_ = 2.0 / h;
  e.off_ = -1.0 / h;
  e.end_diag_ = 2.0 / h;
  if (tail_decay > 0.0) {
    const double k = tail_decay;
    e.w_.front() = e.w_.back() = 0.5 * h + 0.5 / k;
    e.pw_.front() = e.pw_.back() = 0.5 * h + 1.0 / (p * k);
    e.end_diag_ = 1.0 / h + 0.5 * k;
  }
  return e;
}

EnergyFunctional EnergyFunctional::on_torus(double p, double beta, const TorusGrid& grid,
                                            bool mean_zero) {
  check_exponent(p, beta);
  EnergyFunctional e;
  e.p_ = p;
  e.beta_ = beta;
  e.grid_ = grid;
  e.mean_zero_ = mean_zero;
  const std::size_t n = grid.size();
  e.w_.assign(n, grid.dx());
  e.pw_.assign(n, grid.dx());
  e.q2_.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double q = grid.wavenumber(m);
    e.q2_[m] = q * q;
  }
  return e;
}

double EnergyFunctional::potential(std::span<const double> u) const {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += pw_[j] * std::pow(std::abs(u[j]), p_);
  return s;
}

double EnergyFunctional::mass(std::span<const double> u) const { return inner(u, u); }

double EnergyFunctional::inner(std::span<const double> a, std::span<const double> b) const {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += w_[j] * a[j] * b[j];
  return s;
}

void EnergyFunctional::apply_kinetic(std::span<const double> u, std::span<double> out) const {
  const std::size_t n = size();
  if (u.size() != n || out.size() != n) throw InvalidArgument("energy: profile length mismatch");
  if (periodic()) {
    const auto& grid = torus_grid();
    auto c = spectrum_from_values(grid, to_complex(u));
    for (std::size_t m = 0; m < n; ++m) c[m] *= q2_[m];
    const auto v = values_from_spectrum(grid, c);
    for (std::size_t j = 0; j < n; ++j) out[j] = grid.dx() * v[j].real();
    return;
  }
  out[0] = end_diag_ * u[0] + off_ * u[1];
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = diag_ * u[j] + off_ * (u[j - 1] + u[j + 1]);
  out[n - 1] = end_diag_ * u[n - 1] + off_ * u[n - 2];
}

double EnergyFunctional::kinetic(std::span<const double> u) const {
  if (periodic()) {
    const auto c = spectrum_from_values(torus_grid(), to_complex(u));
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) s += q2_[m] * std::norm(c[m]);
    return 0.5 * s;
  }
  const std::size_t n = size();
  const double h = line_grid().h();
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) s += (u[j + 1] - u[j]) * (u[j + 1] - u[j]);
  s /= h;
  if (tail_decay_ > 0.0) {
    s += 0.5 * tail_decay_ * (u[0] * u[0] + u[n - 1] * u[n - 1]);
  } else {
    s += (u[0] * u[0] + u[n - 1] * u[n - 1]) / h;
  }
  return 0.5 * s;
}

double EnergyFunctional::energy(std::span<const double> u) const {
  return -(beta_ / p_) * potential(u) + kinetic(u);
}

void EnergyFunctional::dual_gradient(std::span<const double> u, std::span<double> g) const {
  apply_kinetic(u, g);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double a = std::abs(u[j]);
    g[j] -= beta_ * pw_[j] * std::pow(a, p_ - 2.0) * u[j];
  }
}

std::vector<double> EnergyFunctional::l2_gradient(std::span<const double> u) const {
  std::vector<double> g(u.size());
  dual_gradient(u, g);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] /= w_[j];
  return g;
}

std::vector<double> EnergyFunctional::second_derivative(std::span<const double> u) const {
  std::vector<double> d(u.size());
  apply_kinetic(u, d);
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = -d[j] / w_[j];
  return d;
}

void EnergyFunctional::solve_shifted(std::span<const double> rhs, double shift,
                                     std::span<double> x) const {
  const std::size_t n = size();
  if (rhs.size() != n || x.size() != n) throw InvalidArgument("energy: solve length mismatch");
  if (periodic()) {
    if (!(shift > 0.0) && !mean_zero_) throw InvalidArgument("energy: shift must be positive");
    const auto& grid = torus_grid();
    auto c = spectrum_from_values(grid, to_complex(rhs));
    for (std::size_t m = 0; m < n; ++m) {
      const double d = grid.dx() * (q2_[m] + shift);
      c[m] = (m == 0 && mean_zero_) ? cplx{} : c[m] / d;
    }
    const auto v = values_from_spectrum(grid, c);
    for (std::size_t j = 0; j < n; ++j) x[j] = v[j].real();
    return;
  }
  if (!(shift >= 0.0)) throw InvalidArgument("energy: shift must be nonnegative");
  // Thomas algorithm for the symmetric tridiagonal K + shift W.
  std::vector<double> c(n), d(n);
  auto diag = [&](std::size_t j) {
    return (j == 0 || j == n - 1 ? end_diag_ : diag_) + shift * w_[j];
  };
  double b = diag(0);
  c[0] = off_ / b;
  d[0] = rhs[0] / b;
  for (std::size_t j = 1; j < n; ++j) {
    b = diag(j) - off_ * c[j - 1];
    c[j] = off_ / b;
    d[j] = (rhs[j] - off_ * d[j - 1]) / b;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) x[j] = d[j] - c[j] * x[j + 1];
}

void EnergyFunctional::project(std::span<double> u) const {
  if (!mean_zero_) return;
  const double m = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
  for (auto& v : u) v -= m;
}

}  // namespace nlsgibbs
