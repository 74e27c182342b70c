#include <atomic>
#include <stdexcept>
#include <string>

#include "nlsgibbs/kernels.hpp"

namespace nlsgibbs::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(NLSGIBBS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() noexcept {
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

inline bool use_avx2() noexcept {
#if defined(NLSGIBBS_HAVE_AVX2)
  return current().load(std::memory_order_relaxed) == Backend::Avx2;
#else
  return false;
#endif
}

}  // namespace

bool backend_supported(Backend backend) noexcept {
  return backend == Backend::Scalar || cpu_has_avx2();
}

Backend active_backend() noexcept { return current().load(); }

void set_backend(Backend backend) {
  if (!backend_supported(backend)) {
    throw std::invalid_argument("kernel backend not supported on this CPU: " +
                                std::string(backend_name(backend)));
  }
  current().store(backend);
}

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

#if defined(NLSGIBBS_HAVE_AVX2)
#define NLSGIBBS_DISPATCH(call) (use_avx2() ? avx2::call : scalar::call)
#else
#define NLSGIBBS_DISPATCH(call) (scalar::call)
#endif

double sum_abs2(std::span<const cplx> x) noexcept { return NLSGIBBS_DISPATCH(sum_abs2(x)); }

double sum_abs_pow(std::span<const cplx> x, double p) noexcept {
  return NLSGIBBS_DISPATCH(sum_abs_pow(x, p));
}

double weighted_sum_abs2(std::span<const cplx> x, std::span<const double> w) noexcept {
  return NLSGIBBS_DISPATCH(weighted_sum_abs2(x, w));
}

void scale_by(std::span<cplx> x, std::span<const double> w) noexcept {
  NLSGIBBS_DISPATCH(scale_by(x, w));
}

void linear_combination(double a, std::span<const cplx> x, double b,
                        std::span<const cplx> y, std::span<cplx> out) noexcept {
  NLSGIBBS_DISPATCH(linear_combination(a, x, b, y, out));
}

#undef NLSGIBBS_DISPATCH

}  // namespace nlsgibbs::kernels
