#pragma once

// Monte Carlo summaries: plain means, batch-means error bars for correlated
// series and least squares for tail-slope fits.

#include <cstddef>
#include <span>

namespace nlsgibbs::stats {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ess = 0.0;           // effective sample size
  std::size_t count = 0;
  std::size_t batches = 0;
};

double mean(std::span<const double> x) noexcept;
/// Unbiased sample variance; 0 for fewer than two points.
double variance(std::span<const double> x) noexcept;

/// Independent samples: standard error sqrt(var/n), ess = n.
Estimate iid_estimate(std::span<const double> x) noexcept;

/// Non-overlapping batch means with batch size floor(sqrt(n)) but never fewer
/// than `min_batches` batches. Series too short for that fall back to the iid
/// formula with one sample per batch. A trailing partial batch is dropped from
/// the error but not from the mean.
Estimate batch_means(std::span<const double> x, std::size_t min_batches = 20) noexcept;

inline double combined_sigma(double a, double b) noexcept;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double residual_rms = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x. Needs at least two
/// distinct abscissae; throws InvalidArgument otherwise.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace nlsgibbs::stats

#include <cmath>

inline double nlsgibbs::stats::combined_sigma(double a, double b) noexcept {
  return std::hypot(a, b);
}
