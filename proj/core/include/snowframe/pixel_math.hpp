#pragma once

#include <cstdint>

namespace snowframe::pixel {

/// round_half_up(v / 255) for non-negative v.
constexpr std::uint32_t div255(std::uint32_t v) noexcept {
  return (2 * v + 255) / 510;
}

/// round_half_up(num / den) for non-negative num and positive den.
constexpr std::int64_t div_round(std::int64_t num, std::int64_t den) noexcept {
  return (2 * num + den) / (2 * den);
}

/// Premultiplied source-over for one channel:
/// src + round_half_up(dst * (255 - src_alpha) / 255).
constexpr std::uint8_t over(std::uint8_t src, std::uint8_t dst,
                            std::uint8_t src_alpha) noexcept {
  return static_cast<std::uint8_t>(src + div255(static_cast<std::uint32_t>(dst) *
                                                (255u - src_alpha)));
}

/// One axis of a pixel-center aligned bilinear resample, kept as an exact
/// rational: the source coordinate of destination index i is
/// ((2i + 1) * src_len - dst_len) / (2 * dst_len), clamped to [0, src_len - 1].
struct AxisTap {
  int i0 = 0;
  int i1 = 0;
  std::int64_t frac = 0;  // weight of i1, out of `den`
  std::int64_t den = 1;
};

constexpr AxisTap axis_tap(int i, int src_len, int dst_len) noexcept {
  const std::int64_t den = 2 * static_cast<std::int64_t>(dst_len);
  const std::int64_t num = (2 * static_cast<std::int64_t>(i) + 1) * src_len - dst_len;
  if (num <= 0) return {0, 0, 0, den};
  const std::int64_t i0 = num / den;
  if (i0 >= src_len - 1) return {src_len - 1, src_len - 1, 0, den};
  return {static_cast<int>(i0), static_cast<int>(i0 + 1), num - i0 * den, den};
}

}  // namespace snowframe::pixel
