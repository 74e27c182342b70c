// AVX2 variants. This translation unit is compiled with -mavx2 -mfma and is
// only ever called after the dispatcher has confirmed CPU support.

#include "nlsgibbs/kernels.hpp"

#include <immintrin.h>

namespace nlsgibbs::kernels::avx2 {

namespace {

inline const double* raw(std::span<const cplx> x) {
  return reinterpret_cast<const double*>(x.data());
}

inline double* raw(std::span<cplx> x) { return reinterpret_cast<double*>(x.data()); }

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// |z|^2 of four consecutive complex values, lanes ordered (0, 2, 1, 3).
inline __m256d norms4(const double* p) {
  const __m256d a = _mm256_loadu_pd(p);
  const __m256d b = _mm256_loadu_pd(p + 4);
  return _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
}

inline __m256d int_power(__m256d r2, int int_p) {
  __m256d out = _mm256_set1_pd(1.0);
  for (int i = 0; i < int_p / 2; ++i) out = _mm256_mul_pd(out, r2);
  if (int_p % 2 == 1) out = _mm256_mul_pd(out, _mm256_sqrt_pd(r2));
  return out;
}

}  // namespace

double sum_abs2(std::span<const cplx> x) noexcept {
  const std::size_t n = x.size();
  const double* p = raw(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, norms4(p + 2 * i));
    acc1 = _mm256_add_pd(acc1, norms4(p + 2 * i + 8));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, norms4(p + 2 * i));
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += std::norm(x[i]);
  return acc;
}

double sum_abs_pow(std::span<const cplx> x, double p) noexcept {
  const int int_p = detail::integer_exponent(p);
  if (int_p == 0) return scalar::sum_abs_pow(x, p);
  const std::size_t n = x.size();
  const double* d = raw(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, int_power(norms4(d + 2 * i), int_p));
  double out = horizontal_sum(acc);
  for (; i < n; ++i) out += detail::abs_pow_from_norm(std::norm(x[i]), p, int_p);
  return out;
}

double weighted_sum_abs2(std::span<const cplx> x, std::span<const double> w) noexcept {
  const std::size_t n = x.size();
  const double* d = raw(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // match the (0, 2, 1, 3) lane order of norms4
    const __m256d wv = _mm256_permute4x64_pd(_mm256_loadu_pd(w.data() + i), 0xD8);
    acc = _mm256_fmadd_pd(wv, norms4(d + 2 * i), acc);
  }
  double out = horizontal_sum(acc);
  for (; i < n; ++i) out += w[i] * std::norm(x[i]);
  return out;
}

void scale_by(std::span<cplx> x, std::span<const double> w) noexcept {
  const std::size_t n = x.size();
  double* d = raw(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w.data() + i);
    const __m256d w01 = _mm256_permute4x64_pd(wv, 0x50);  // w0 w0 w1 w1
    const __m256d w23 = _mm256_permute4x64_pd(wv, 0xFA);  // w2 w2 w3 w3
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), w01));
    _mm256_storeu_pd(d + 2 * i + 4, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i + 4), w23));
  }
  for (; i < n; ++i) x[i] *= w[i];
}

void linear_combination(double a, std::span<const cplx> x, double b,
                        std::span<const cplx> y, std::span<cplx> out) noexcept {
  const std::size_t m = 2 * out.size();
  const double* xd = raw(x);
  const double* yd = raw(y);
  double* od = raw(out);
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d by = _mm256_mul_pd(bv, _mm256_loadu_pd(yd + i));
    _mm256_storeu_pd(od + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(xd + i), by));
  }
  for (; i < m; ++i) od[i] = a * xd[i] + b * yd[i];
}

}  // namespace nlsgibbs::kernels::avx2
