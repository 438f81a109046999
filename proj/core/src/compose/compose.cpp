#include "snowframe/compose/compose.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>
#include <thread>

#include "snowframe/errors.hpp"
#include "snowframe/pixel_math.hpp"

namespace snowframe::compose {

void validate(const Layer& layer) {
  if (!layer.source) throw ValidationError("layer has no source");
  if (!layer.source->premultiplied()) throw ValidationError("layer source must be premultiplied");
  if (!(layer.opacity >= 0.0 && layer.opacity <= 1.0)) {
    throw ValidationError("layer opacity must be in [0, 1]");
  }
  if (layer.dst_rect.w < 0 || layer.dst_rect.h < 0) {
    throw ValidationError("layer dst_rect has negative size");
  }
  if (layer.mask && layer.mask->size() != layer.source->size()) {
    throw ValidationError("layer mask size differs from its source");
  }
}

void validate(const Scene& scene) {
  if (scene.output.width < 1 || scene.output.height < 1) {
    throw ValidationError("scene output must be at least 1x1");
  }
  for (const auto& layer : scene.layers) validate(layer);
}

void validate(const SlotGeometry& geometry, Size output) {
  const Rect bounds{0, 0, output.width, output.height};
  for (std::size_t i = 0; i < geometry.regions.size(); ++i) {
    const Rect& r = geometry.regions[i];
    if (r.empty()) throw ValidationError("slot " + std::to_string(i) + " region is empty");
    if (!contains(bounds, r)) {
      throw ValidationError("slot " + std::to_string(i) + " region lies outside the output");
    }
  }
}

SlotGeometry default_slot_geometry(Size output) {
  // Head centers as fractions of the canvas; side is 1/8 of the width.
  static constexpr double kCx[kFigureCount] = {0.17, 0.39, 0.61, 0.83};
  static constexpr double kCy[kFigureCount] = {0.34, 0.40, 0.36, 0.42};
  const int side = std::max(1, std::min(output.width / 8, output.height / 4));
  SlotGeometry g;
  for (int i = 0; i < kFigureCount; ++i) {
    const int x = static_cast<int>(std::lround(kCx[i] * output.width)) - side / 2;
    const int y = static_cast<int>(std::lround(kCy[i] * output.height)) - side / 2;
    g.regions[i] = Rect{std::clamp(x, 0, output.width - side), std::clamp(y, 0, output.height - side),
                        std::min(side, output.width), std::min(side, output.height)};
  }
  return g;
}

namespace {

std::uint8_t scale_channel(std::uint8_t v, double factor) {
  return static_cast<std::uint8_t>(std::floor(v * factor + 0.5));
}

void blend_rows(Rgba8Frame& out, const Layer& layer, const Rect& clip, int y_begin, int y_end) {
  const Rgba8Frame& src = *layer.source;
  const Rect& dr = layer.dst_rect;
  const bool identity = dr.w == src.width() && dr.h == src.height();
  const bool plain = layer.opacity == 1.0 && !layer.mask;

  std::vector<pixel::AxisTap> xs;
  if (!identity) {
    xs.resize(static_cast<std::size_t>(clip.w));
    for (int x = 0; x < clip.w; ++x) xs[x] = pixel::axis_tap(clip.x + x - dr.x, src.width(), dr.w);
  }

  if (identity && plain) {
    for (int y = y_begin; y < y_end; ++y) {
      std::uint8_t* dst = out.row(y) + 4 * clip.x;
      const std::uint8_t* sp = src.row(y - dr.y) + 4 * (clip.x - dr.x);
      for (int x = 0; x < clip.w; ++x, dst += 4, sp += 4) {
        std::uint32_t word;
        std::memcpy(&word, sp, 4);
        if (word == 0) continue;
        const std::uint8_t a = sp[3];
        if (a == 255) {
          std::memcpy(dst, sp, 4);
          continue;
        }
        for (int c = 0; c < 4; ++c) dst[c] = pixel::over(sp[c], dst[c], a);
      }
    }
    return;
  }

  for (int y = y_begin; y < y_end; ++y) {
    std::uint8_t* dst = out.row(y) + 4 * clip.x;
    const int sy = y - dr.y;
    pixel::AxisTap ty{sy, sy, 0, 1};
    if (!identity) ty = pixel::axis_tap(sy, src.height(), dr.h);
    const std::uint8_t* r0 = src.row(ty.i0);
    const std::uint8_t* r1 = src.row(ty.i1);
    const std::uint8_t* m0 = layer.mask ? layer.mask->row(ty.i0).data() : nullptr;
    const std::uint8_t* m1 = layer.mask ? layer.mask->row(ty.i1).data() : nullptr;

    for (int x = 0; x < clip.w; ++x, dst += 4) {
      std::uint8_t s[4];
      std::uint8_t m = 255;
      if (identity) {
        const int sx = clip.x + x - dr.x;
        std::copy_n(r0 + 4 * sx, 4, s);
        if (m0) m = m0[sx];
      } else {
        const pixel::AxisTap& tx = xs[x];
        const std::int64_t w00 = (tx.den - tx.frac) * (ty.den - ty.frac);
        const std::int64_t w10 = tx.frac * (ty.den - ty.frac);
        const std::int64_t w01 = (tx.den - tx.frac) * ty.frac;
        const std::int64_t w11 = tx.frac * ty.frac;
        const std::int64_t den = tx.den * ty.den;
        for (int c = 0; c < 4; ++c) {
          const std::int64_t v = w00 * r0[4 * tx.i0 + c] + w10 * r0[4 * tx.i1 + c] +
                                 w01 * r1[4 * tx.i0 + c] + w11 * r1[4 * tx.i1 + c];
          s[c] = static_cast<std::uint8_t>(pixel::div_round(v, den));
        }
        if (m0) {
          const std::int64_t v = w00 * m0[tx.i0] + w10 * m0[tx.i1] + w01 * m1[tx.i0] + w11 * m1[tx.i1];
          m = static_cast<std::uint8_t>(pixel::div_round(v, den));
        }
      }
      if (!plain) {
        const double factor = layer.opacity * m / 255.0;
        for (int c = 0; c < 4; ++c) s[c] = scale_channel(s[c], factor);
      }
      if (s[3] == 0 && s[0] == 0 && s[1] == 0 && s[2] == 0) continue;
      if (s[3] == 255) {
        std::copy_n(s, 4, dst);
        continue;
      }
      for (int c = 0; c < 4; ++c) dst[c] = pixel::over(s[c], dst[c], s[3]);
    }
  }
}

Rect visible_part(const Layer& layer, Size output) {
  return intersect(layer.dst_rect, Rect{0, 0, output.width, output.height});
}

}  // namespace

void draw_layer(Rgba8Frame& dst, const Layer& layer) {
  validate(layer);
  const Rect clip = visible_part(layer, dst.size());
  if (clip.empty() || layer.opacity == 0.0) return;
  blend_rows(dst, layer, clip, clip.y, clip.y + clip.h);
}

Rgba8Frame composite(const Scene& scene, int workers) {
  validate(scene);
  Rgba8Frame out = Rgba8Frame::filled(scene.output.width, scene.output.height, Rgba{0, 0, 0, 255});

  std::vector<std::size_t> order(scene.layers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scene.layers[a].z < scene.layers[b].z;
  });

  const int h = scene.output.height;
  const int n = std::clamp(workers, 1, h);
  auto render_band = [&](int y_begin, int y_end) {
    for (std::size_t idx : order) {
      const Layer& layer = scene.layers[idx];
      const Rect clip = visible_part(layer, scene.output);
      if (clip.empty() || layer.opacity == 0.0) continue;
      const int y0 = std::max(y_begin, clip.y);
      const int y1 = std::min(y_end, clip.y + clip.h);
      if (y0 < y1) blend_rows(out, layer, clip, y0, y1);
    }
  };

  if (n == 1) {
    render_band(0, h);
    return out;
  }
  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int y0 = static_cast<int>(static_cast<std::int64_t>(h) * i / n);
    const int y1 = static_cast<int>(static_cast<std::int64_t>(h) * (i + 1) / n);
    threads.emplace_back(render_band, y0, y1);
  }
  threads.clear();
  return out;
}

Rect sprite_source_region(Size camera, const Rect& face, double padding) {
  if (face.empty()) throw ValidationError("face rect is empty");
  if (!(padding >= 0.0)) throw ValidationError("sprite padding must be >= 0");
  const Rect bounds{0, 0, camera.width, camera.height};
  if (!contains(bounds, face)) throw BoundsError("face rect lies outside the camera frame");
  const int px = static_cast<int>(std::lround(face.w * padding));
  const int py = static_cast<int>(std::lround(face.h * padding));
  return intersect(Rect{face.x - px, face.y - py, face.w + 2 * px, face.h + 2 * py}, bounds);
}

GrayImage ellipse_mask(int width, int height, double feather) {
  if (!(feather >= 0.0 && feather <= 1.0)) throw ValidationError("feather must be in [0, 1]");
  GrayImage mask(width, height);
  const double rx = width / 2.0;
  const double ry = height / 2.0;
  const double inner = 1.0 - feather;
  for (int y = 0; y < height; ++y) {
    const double dy = (y + 0.5 - ry) / ry;
    for (int x = 0; x < width; ++x) {
      const double dx = (x + 0.5 - rx) / rx;
      const double rho = std::sqrt(dx * dx + dy * dy);
      std::uint8_t a = 0;
      if (rho <= inner) {
        a = 255;
      } else if (rho < 1.0) {
        a = static_cast<std::uint8_t>(std::floor(255.0 * (1.0 - rho) / feather + 0.5));
      }
      mask.at(x, y) = a;
    }
  }
  return mask;
}

Rgba8Frame extract_face_sprite(const Rgba8Frame& camera, const Rect& face, double padding,
                               double feather) {
  const Rect region = sprite_source_region(camera.size(), face, padding);
  const GrayImage mask = ellipse_mask(region.w, region.h, feather);
  Rgba8Frame sprite(region.w, region.h, true);
  for (int y = 0; y < region.h; ++y) {
    const std::uint8_t* src = camera.row(region.y + y) + 4 * region.x;
    std::uint8_t* dst = sprite.row(y);
    for (int x = 0; x < region.w; ++x, src += 4, dst += 4) {
      const std::uint32_t m = mask.at(x, y);
      if (camera.premultiplied()) {
        for (int c = 0; c < 4; ++c) dst[c] = static_cast<std::uint8_t>(pixel::div255(src[c] * m));
      } else {
        const std::uint32_t a = pixel::div255(src[3] * m);
        for (int c = 0; c < 3; ++c) dst[c] = static_cast<std::uint8_t>(pixel::div255(src[c] * a));
        dst[3] = static_cast<std::uint8_t>(a);
      }
    }
  }
  return sprite;
}

Scene build_scene(std::shared_ptr<const Rgba8Frame> background, const SpriteList& sprites,
                  const SlotGeometry& geometry, std::shared_ptr<const Rgba8Frame> snow,
                  Size output) {
  validate(geometry, output);
  std::array<bool, kFigureCount> used{};
  for (const auto& [slot, sprite] : sprites) {
    if (slot < 0 || slot >= kFigureCount) {
      throw ValidationError("sprite slot " + std::to_string(slot) + " out of range");
    }
    if (used[slot]) throw ValidationError("duplicate sprite slot " + std::to_string(slot));
    used[slot] = true;
  }

  const Rect full{0, 0, output.width, output.height};
  Scene scene{output, {}};
  scene.layers.push_back(Layer{kBackgroundZ, std::move(background), full, 1.0, nullptr});
  for (const auto& [slot, sprite] : sprites) {
    scene.layers.push_back(Layer{kSpriteBaseZ + slot, sprite, geometry.regions[slot], 1.0, nullptr});
  }
  scene.layers.push_back(Layer{kSnowZ, std::move(snow), full, 1.0, nullptr});
  validate(scene);
  return scene;
}

}  // namespace snowframe::compose
