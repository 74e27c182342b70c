#include "nlsgibbs/line_grid.hpp"

#include <cmath>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs {

LineGrid::LineGrid(double half_width, std::size_t n) : half_width_(half_width), n_(n), h_(0.0) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidArgument("LineGrid: half-width must be positive");
  if (n < 8 || n % 2 != 0) throw InvalidArgument("LineGrid: n must be even and >= 8");
  h_ = 2.0 * half_width / static_cast<double>(n);
}

}  // namespace nlsgibbs
