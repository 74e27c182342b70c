#pragma once

// Thin FFTW wrapper. Plans are created under a process-wide lock (the FFTW
// planner is not re-entrant) and cached per thread; execution is lock-free.
// FFTW_ESTIMATE is used throughout so that plans, and therefore results, do
// not depend on timing measurements.

#include <complex>
#include <span>

namespace nlsgibbs::fft {

using cplx = std::complex<double>;

/// out_m = sum_j in_j exp(-2 pi i j m / n). `in` and `out` must not alias.
void forward(std::span<const cplx> in, std::span<cplx> out);

/// out_j = sum_m in_m exp(+2 pi i j m / n), unnormalised.
void backward(std::span<const cplx> in, std::span<cplx> out);

}  // namespace nlsgibbs::fft
