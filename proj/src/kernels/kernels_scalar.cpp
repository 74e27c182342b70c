#include "nlsgibbs/kernels.hpp"

#include <cmath>

namespace nlsgibbs::kernels {

namespace detail {

int integer_exponent(double p) noexcept {
  if (p >= 1.0 && p <= 16.0 && std::floor(p) == p) return static_cast<int>(p);
  return 0;
}

}  // namespace detail

namespace scalar {

double sum_abs2(std::span<const cplx> x) noexcept {
  double acc = 0.0;
  for (const cplx& z : x) acc += std::norm(z);
  return acc;
}

double sum_abs_pow(std::span<const cplx> x, double p) noexcept {
  const int int_p = detail::integer_exponent(p);
  double acc = 0.0;
  for (const cplx& z : x) acc += detail::abs_pow_from_norm(std::norm(z), p, int_p);
  return acc;
}

double weighted_sum_abs2(std::span<const cplx> x, std::span<const double> w) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * std::norm(x[i]);
  return acc;
}

void scale_by(std::span<cplx> x, std::span<const double> w) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= w[i];
}

void linear_combination(double a, std::span<const cplx> x, double b,
                        std::span<const cplx> y, std::span<cplx> out) noexcept {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
}

}  // namespace scalar
}  // namespace nlsgibbs::kernels
