#pragma once

// Uniform grid standing in for the real line: x_j = -R + j h, h = 2R/n,
// j = 0..n-1. With n even, x_{n/2} = 0. A grid built from a torus of length L
// as LineGrid(L/2, n) has exactly the torus nodes.

#include <cstddef>

namespace nlsgibbs {

class LineGrid {
 public:
  LineGrid(double half_width, std::size_t n);

  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double x(std::size_t j) const noexcept { return -half_width_ + static_cast<double>(j) * h_; }
  double left() const noexcept { return x(0); }
  double right() const noexcept { return x(n_ - 1); }
  std::size_t center() const noexcept { return n_ / 2; }

  friend bool operator==(const LineGrid&, const LineGrid&) = default;

 private:
  double half_width_;
  std::size_t n_;
  double h_;
};

}  // namespace nlsgibbs
