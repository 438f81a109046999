#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snowframe/geometry.hpp"

namespace snowframe {

/// Row-major 8-bit luminance image. Always at least 1x1.
class GrayImage {
 public:
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Size size() const noexcept { return {width_, height_}; }

  std::uint8_t at(int x, int y) const noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint8_t& at(int x, int y) noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const std::uint8_t> row(int y) const noexcept {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const std::uint8_t> samples() const noexcept { return samples_; }
  std::span<std::uint8_t> samples() noexcept { return samples_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> samples_;
};

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 0;

  friend bool operator==(const Rgba&, const Rgba&) = default;
};

/// Row-major RGBA frame, 4 bytes per pixel. When `premultiplied` is set every
/// color channel is <= its alpha.
class Rgba8Frame {
 public:
  Rgba8Frame(int width, int height, bool premultiplied = true);
  Rgba8Frame(int width, int height, std::vector<std::uint8_t> pixels,
             bool premultiplied);

  static Rgba8Frame filled(int width, int height, Rgba color,
                           bool premultiplied = true);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Size size() const noexcept { return {width_, height_}; }
  bool premultiplied() const noexcept { return premultiplied_; }
  void set_premultiplied(bool p) noexcept { premultiplied_ = p; }

  Rgba pixel(int x, int y) const noexcept {
    const std::uint8_t* p = data() + offset(x, y);
    return {p[0], p[1], p[2], p[3]};
  }
  void set_pixel(int x, int y, Rgba c) noexcept {
    std::uint8_t* p = data() + offset(x, y);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
    p[3] = c.a;
  }

  std::uint8_t* data() noexcept { return pixels_.data(); }
  const std::uint8_t* data() const noexcept { return pixels_.data(); }
  std::uint8_t* row(int y) noexcept { return data() + offset(0, y); }
  const std::uint8_t* row(int y) const noexcept { return data() + offset(0, y); }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const Rgba8Frame&, const Rgba8Frame&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * 4;
  }

  int width_;
  int height_;
  bool premultiplied_;
  std::vector<std::uint8_t> pixels_;
};

/// Integer Rec. 601 luma: (77 R + 150 G + 29 B) >> 8.
inline std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b) >> 8);
}

GrayImage to_gray(const Rgba8Frame& frame);

/// Luma conversion fused with an area-averaging downscale. `ratio` in (0, 1];
/// the output is max(1, floor(w * ratio)) x max(1, floor(h * ratio)).
GrayImage to_gray_downscaled(const Rgba8Frame& frame, double ratio);

/// Area-averaging resample of a gray image to an explicit size.
GrayImage resize_area(const GrayImage& img, Size out);

/// Bilinear resample of an RGBA frame (pixel-center aligned, edge clamped).
Rgba8Frame resize_bilinear(const Rgba8Frame& frame, Size out);

Rgba8Frame mirror_horizontal(const Rgba8Frame& frame);

/// Converts a straight-alpha frame to premultiplied form (round half up).
Rgba8Frame premultiply(const Rgba8Frame& frame);

/// Copy of `region` (which must lie inside the frame).
Rgba8Frame crop(const Rgba8Frame& frame, const Rect& region);

/// True when every color channel is <= alpha.
bool is_valid_premultiplied(const Rgba8Frame& frame) noexcept;

}  // namespace snowframe
