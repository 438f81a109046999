#include "snowframe/image.hpp"

#include <cmath>
#include <string>

#include "snowframe/errors.hpp"
#include "snowframe/pixel_math.hpp"

namespace snowframe {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw ValidationError("image dimensions must be >= 1, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Rect round_rect(const RectF& r) noexcept {
  const int x = static_cast<int>(std::floor(r.x + 0.5));
  const int y = static_cast<int>(std::floor(r.y + 0.5));
  const int x1 = static_cast<int>(std::floor(r.x + r.w + 0.5));
  const int y1 = static_cast<int>(std::floor(r.y + r.h + 0.5));
  return Rect{x, y, x1 - x, y1 - y};
}

double iou(const RectF& a, const RectF& b) noexcept {
  const double x0 = std::max(a.x, b.x);
  const double y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.x + a.w, b.x + b.w);
  const double y1 = std::min(a.y + a.h, b.y + b.h);
  const double inter = (x1 > x0 && y1 > y0) ? (x1 - x0) * (y1 - y0) : 0.0;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_dims(width, height);
  if (samples_.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("gray image sample count does not match dimensions");
  }
}

Rgba8Frame::Rgba8Frame(int width, int height, bool premultiplied)
    : width_(width), height_(height), premultiplied_(premultiplied) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height * 4, 0);
}

Rgba8Frame::Rgba8Frame(int width, int height, std::vector<std::uint8_t> pixels,
                       bool premultiplied)
    : width_(width),
      height_(height),
      premultiplied_(premultiplied),
      pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 4) {
    throw ValidationError("rgba frame byte count does not match dimensions");
  }
}

Rgba8Frame Rgba8Frame::filled(int width, int height, Rgba color, bool premultiplied) {
  Rgba8Frame f(width, height, premultiplied);
  std::uint8_t* p = f.data();
  const std::size_t n = static_cast<std::size_t>(width) * height;
  for (std::size_t i = 0; i < n; ++i, p += 4) {
    p[0] = color.r;
    p[1] = color.g;
    p[2] = color.b;
    p[3] = color.a;
  }
  return f;
}

GrayImage to_gray(const Rgba8Frame& frame) {
  GrayImage out(frame.width(), frame.height());
  const std::uint8_t* p = frame.data();
  auto dst = out.samples();
  for (std::size_t i = 0; i < dst.size(); ++i, p += 4) dst[i] = luma601(p[0], p[1], p[2]);
  return out;
}

GrayImage to_gray_downscaled(const Rgba8Frame& frame, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ValidationError("downscale ratio must lie in (0, 1]");
  }
  const int ow = std::max(1, static_cast<int>(std::floor(frame.width() * ratio)));
  const int oh = std::max(1, static_cast<int>(std::floor(frame.height() * ratio)));
  if (ow == frame.width() && oh == frame.height()) return to_gray(frame);

  GrayImage out(ow, oh);
  const int w = frame.width();
  const int h = frame.height();
  std::vector<std::uint32_t> acc(static_cast<std::size_t>(ow));
  for (int oy = 0; oy < oh; ++oy) {
    const int y0 = static_cast<int>(static_cast<std::int64_t>(oy) * h / oh);
    const int y1 = static_cast<int>(static_cast<std::int64_t>(oy + 1) * h / oh);
    std::fill(acc.begin(), acc.end(), 0u);
    for (int y = y0; y < y1; ++y) {
      const std::uint8_t* row = frame.row(y);
      for (int ox = 0; ox < ow; ++ox) {
        const int x0 = static_cast<int>(static_cast<std::int64_t>(ox) * w / ow);
        const int x1 = static_cast<int>(static_cast<std::int64_t>(ox + 1) * w / ow);
        std::uint32_t s = 0;
        for (int x = x0; x < x1; ++x) {
          const std::uint8_t* p = row + 4 * x;
          s += luma601(p[0], p[1], p[2]);
        }
        acc[ox] += s;
      }
    }
    for (int ox = 0; ox < ow; ++ox) {
      const int x0 = static_cast<int>(static_cast<std::int64_t>(ox) * w / ow);
      const int x1 = static_cast<int>(static_cast<std::int64_t>(ox + 1) * w / ow);
      const std::int64_t n = static_cast<std::int64_t>(x1 - x0) * (y1 - y0);
      out.at(ox, oy) = static_cast<std::uint8_t>(pixel::div_round(acc[ox], n));
    }
  }
  return out;
}

GrayImage resize_area(const GrayImage& img, Size out_size) {
  check_dims(out_size.width, out_size.height);
  const int w = img.width();
  const int h = img.height();
  const int ow = out_size.width;
  const int oh = out_size.height;
  GrayImage out(ow, oh);
  for (int oy = 0; oy < oh; ++oy) {
    // Upscaling maps several outputs onto one source row; keep the span non-empty.
    const int y0 = static_cast<int>(static_cast<std::int64_t>(oy) * h / oh);
    const int y1 = std::max(y0 + 1, static_cast<int>(static_cast<std::int64_t>(oy + 1) * h / oh));
    for (int ox = 0; ox < ow; ++ox) {
      const int x0 = static_cast<int>(static_cast<std::int64_t>(ox) * w / ow);
      const int x1 = std::max(x0 + 1, static_cast<int>(static_cast<std::int64_t>(ox + 1) * w / ow));
      std::int64_t s = 0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) s += img.at(x, y);
      out.at(ox, oy) = static_cast<std::uint8_t>(
          pixel::div_round(s, static_cast<std::int64_t>(x1 - x0) * (y1 - y0)));
    }
  }
  return out;
}

Rgba8Frame resize_bilinear(const Rgba8Frame& frame, Size out_size) {
  check_dims(out_size.width, out_size.height);
  Rgba8Frame out(out_size.width, out_size.height, frame.premultiplied());
  std::vector<pixel::AxisTap> xs(static_cast<std::size_t>(out_size.width));
  for (int x = 0; x < out_size.width; ++x) xs[x] = pixel::axis_tap(x, frame.width(), out_size.width);
  for (int y = 0; y < out_size.height; ++y) {
    const pixel::AxisTap ty = pixel::axis_tap(y, frame.height(), out_size.height);
    const std::uint8_t* r0 = frame.row(ty.i0);
    const std::uint8_t* r1 = frame.row(ty.i1);
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < out_size.width; ++x) {
      const pixel::AxisTap& tx = xs[x];
      const std::int64_t w00 = (tx.den - tx.frac) * (ty.den - ty.frac);
      const std::int64_t w10 = tx.frac * (ty.den - ty.frac);
      const std::int64_t w01 = (tx.den - tx.frac) * ty.frac;
      const std::int64_t w11 = tx.frac * ty.frac;
      const std::int64_t den = tx.den * ty.den;
      for (int c = 0; c < 4; ++c) {
        const std::int64_t v = w00 * r0[4 * tx.i0 + c] + w10 * r0[4 * tx.i1 + c] +
                               w01 * r1[4 * tx.i0 + c] + w11 * r1[4 * tx.i1 + c];
        dst[4 * x + c] = static_cast<std::uint8_t>(pixel::div_round(v, den));
      }
    }
  }
  return out;
}

Rgba8Frame mirror_horizontal(const Rgba8Frame& frame) {
  Rgba8Frame out(frame.width(), frame.height(), frame.premultiplied());
  const int w = frame.width();
  for (int y = 0; y < frame.height(); ++y) {
    const std::uint8_t* src = frame.row(y);
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* s = src + 4 * (w - 1 - x);
      std::copy(s, s + 4, dst + 4 * x);
    }
  }
  return out;
}

Rgba8Frame premultiply(const Rgba8Frame& frame) {
  if (frame.premultiplied()) return frame;
  Rgba8Frame out = frame;
  std::uint8_t* p = out.data();
  const std::size_t n = static_cast<std::size_t>(out.width()) * out.height();
  for (std::size_t i = 0; i < n; ++i, p += 4) {
    const std::uint32_t a = p[3];
    if (a == 255) continue;
    for (int c = 0; c < 3; ++c) p[c] = static_cast<std::uint8_t>(pixel::div255(p[c] * a));
  }
  out.set_premultiplied(true);
  return out;
}

Rgba8Frame crop(const Rgba8Frame& frame, const Rect& region) {
  if (region.empty() || !contains(Rect{0, 0, frame.width(), frame.height()}, region)) {
    throw BoundsError("crop region outside frame");
  }
  Rgba8Frame out(region.w, region.h, frame.premultiplied());
  for (int y = 0; y < region.h; ++y) {
    const std::uint8_t* src = frame.row(region.y + y) + 4 * region.x;
    std::copy(src, src + 4 * region.w, out.row(y));
  }
  return out;
}

bool is_valid_premultiplied(const Rgba8Frame& frame) noexcept {
  const std::uint8_t* p = frame.data();
  const std::size_t n = static_cast<std::size_t>(frame.width()) * frame.height();
  for (std::size_t i = 0; i < n; ++i, p += 4) {
    if (p[0] > p[3] || p[1] > p[3] || p[2] > p[3]) return false;
  }
  return true;
}

}  // namespace snowframe
