#pragma once

// Random streams. Every stochastic routine takes a stream explicitly; a stream
// is a value type so copying it forks an identical sequence.

#include <complex>
#include <cstdint>
#include <random>

namespace nlsgibbs {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// Standard complex Gaussian: independent real and imaginary parts with
  /// variance 1/2 each, so E|g|^2 = 1.
  std::complex<double> complex_normal() {
    constexpr double s = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {s * re, s * im};
  }

  std::mt19937_64& engine() noexcept { return engine_; }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::uint64_t seed_;
};

/// Seed of child stream `index` under `master`. splitmix64 finaliser applied to
/// a golden-ratio mix of the pair; documented in the README as the splitting
/// scheme, so it must never change.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace nlsgibbs
