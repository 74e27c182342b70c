#pragma once

// Data-parallel inner loops shared by the field, sampler and solver code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active backend is chosen once at startup from CPUID and can be
// overridden (tests pin both and compare them).

#include <complex>
#include <span>
#include <string_view>

namespace nlsgibbs::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

bool backend_supported(Backend backend) noexcept;
Backend active_backend() noexcept;
/// Throws std::invalid_argument if the CPU cannot run `backend`.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend) noexcept;

/// Sum of |x_i|^2.
double sum_abs2(std::span<const cplx> x) noexcept;

/// Sum of |x_i|^p. Integer p takes a multiply/sqrt path; other p falls back
/// to pow() in both backends.
double sum_abs_pow(std::span<const cplx> x, double p) noexcept;

/// Sum of w_i |x_i|^2.
double weighted_sum_abs2(std::span<const cplx> x, std::span<const double> w) noexcept;

/// x_i *= w_i (complex by real).
void scale_by(std::span<cplx> x, std::span<const double> w) noexcept;

/// out_i = a x_i + b y_i. `out` may alias `x` or `y`.
void linear_combination(double a, std::span<const cplx> x, double b,
                        std::span<const cplx> y, std::span<cplx> out) noexcept;

namespace scalar {
double sum_abs2(std::span<const cplx> x) noexcept;
double sum_abs_pow(std::span<const cplx> x, double p) noexcept;
double weighted_sum_abs2(std::span<const cplx> x, std::span<const double> w) noexcept;
void scale_by(std::span<cplx> x, std::span<const double> w) noexcept;
void linear_combination(double a, std::span<const cplx> x, double b,
                        std::span<const cplx> y, std::span<cplx> out) noexcept;
}  // namespace scalar

namespace avx2 {
double sum_abs2(std::span<const cplx> x) noexcept;
double sum_abs_pow(std::span<const cplx> x, double p) noexcept;
double weighted_sum_abs2(std::span<const cplx> x, std::span<const double> w) noexcept;
void scale_by(std::span<cplx> x, std::span<const double> w) noexcept;
void linear_combination(double a, std::span<const cplx> x, double b,
                        std::span<const cplx> y, std::span<cplx> out) noexcept;
}  // namespace avx2

namespace detail {
// |z|^p from r2 = |z|^2; shared by both backends' tail loops.
inline double abs_pow_from_norm(double r2, double p, int int_p) noexcept;
int integer_exponent(double p) noexcept;  // p if p is a small positive integer, else 0
}  // namespace detail

}  // namespace nlsgibbs::kernels

#include <cmath>

namespace nlsgibbs::kernels::detail {

inline double abs_pow_from_norm(double r2, double p, int int_p) noexcept {
  if (int_p == 0) return std::pow(r2, 0.5 * p);
  double out = 1.0;
  for (int i = 0; i < int_p / 2; ++i) out *= r2;
  if (int_p % 2 == 1) out *= std::sqrt(r2);
  return out;
}

}  // namespace nlsgibbs::kernels::detail
