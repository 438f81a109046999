#pragma once

#include <cstdint>
#include <vector>

#include "snowframe/geometry.hpp"
#include "snowframe/image.hpp"

namespace snowframe::detect {

/// Summed-area tables of an image and of its squared samples. Both tables are
/// (width+1) x (height+1); entry (x, y) covers the samples in [0,x) x [0,y).
/// 64-bit entries hold the exact totals for images up to 8192x8192.
struct IntegralPair {
  int width = 0;   // image width; table stride is width + 1
  int height = 0;  // image height
  std::vector<std::int64_t> sum;
  std::vector<std::int64_t> sqsum;

  int stride() const noexcept { return width + 1; }
  std::int64_t sum_at(int x, int y) const noexcept {
    return sum[static_cast<std::size_t>(y) * stride() + x];
  }
  std::int64_t sqsum_at(int x, int y) const noexcept {
    return sqsum[static_cast<std::size_t>(y) * stride() + x];
  }
};

IntegralPair integral_images(const GrayImage& img);

/// Sum of samples inside `rect`. Throws BoundsError when the rectangle does
/// not fit the table; zero-area rectangles sum to 0.
std::int64_t rect_sum(const IntegralPair& ii, const Rect& rect);
std::int64_t rect_sqsum(const IntegralPair& ii, const Rect& rect);

}  // namespace snowframe::detect
