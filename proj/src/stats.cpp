#include "nlsgibbs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs::stats {

double mean(std::span<const double> x) noexcept {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) noexcept {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

Estimate iid_estimate(std::span<const double> x) noexcept {
  Estimate e;
  e.count = x.size();
  e.batches = x.size();
  e.mean = mean(x);
  e.ess = static_cast<double>(x.size());
  if (x.size() >= 2) e.std_error = std::sqrt(variance(x) / static_cast<double>(x.size()));
  return e;
}

Estimate batch_means(std::span<const double> x, std::size_t min_batches) noexcept {
  const std::size_t n = x.size();
  min_batches = std::max<std::size_t>(min_batches, 2);
  if (n < 2 * min_batches) return iid_estimate(x);

  std::size_t size = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  size = std::min(size, n / min_batches);
  size = std::max<std::size_t>(size, 1);
  const std::size_t count = n / size;

  std::vector<double> means(count);
  for (std::size_t b = 0; b < count; ++b) {
    means[b] = mean(x.subspan(b * size, size));
  }
  Estimate e;
  e.count = n;
  e.batches = count;
  e.mean = mean(x);
  const double var_batch = variance(means);
  e.std_error = std::sqrt(var_batch / static_cast<double>(count));
  const double var_raw = variance(x);
  if (var_batch > 0.0) {
    e.ess = std::min(static_cast<double>(n), static_cast<double>(n) * var_raw /
                                                 (static_cast<double>(size) * var_batch));
  } else {
    e.ess = static_cast<double>(n);
  }
  return e;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("fit_line: need at least two points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_line: abscissae are all equal");

  LineFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.residual_rms = std::sqrt(rss / static_cast<double>(n));
  if (n > 2) f.slope_std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return f;
}

}  // namespace nlsgibbs::stats
