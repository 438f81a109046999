#include "snowframe/compose/background.hpp"

#include <algorithm>
#include <cmath>

#include "snowframe/errors.hpp"
#include "snowframe/png_io.hpp"

namespace snowframe::compose {

namespace {

struct Disc {
  double cx, cy, r;
};

std::uint8_t lerp8(double a, double b, double t) {
  return static_cast<std::uint8_t>(std::lround(a + (b - a) * std::clamp(t, 0.0, 1.0)));
}

}  // namespace

Rgba8Frame procedural_background(Size size, const SlotGeometry& geometry) {
  Rgba8Frame out(size.width, size.height, true);
  const double horizon = 0.72 * size.height;

  std::vector<Disc> discs;
  for (const Rect& head : geometry.regions) {
    const double r = head.w / 2.0;
    const double cx = head.x + r;
    const double cy = head.y + head.h / 2.0;
    discs.push_back({cx, cy + r * 2.3, r * 1.45});   // body
    discs.push_back({cx, cy + r * 4.6, r * 1.9});    // base
  }

  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      Rgba c;
      const double fy = (y + 0.5) / size.height;
      if (y < horizon) {
        c = {lerp8(12, 40, fy / 0.72), lerp8(18, 52, fy / 0.72), lerp8(48, 96, fy / 0.72), 255};
      } else {
        const double t = (y - horizon) / (size.height - horizon);
        c = {lerp8(200, 232, t), lerp8(208, 236, t), lerp8(226, 244, t), 255};
      }
      for (const Disc& d : discs) {
        const double dx = x + 0.5 - d.cx;
        const double dy = y + 0.5 - d.cy;
        if (dx * dx + dy * dy <= d.r * d.r) {
          const double shade = 0.82 + 0.18 * std::clamp(-dx / d.r, -1.0, 1.0);
          const auto v = static_cast<std::uint8_t>(std::lround(240 * shade));
          c = {v, v, static_cast<std::uint8_t>(std::min(255, v + 8)), 255};
        }
      }
      out.set_pixel(x, y, c);
    }
  }
  // Faceless heads: pale ovals the face sprites land on.
  for (const Rect& head : geometry.regions) {
    const double rx = head.w / 2.0, ry = head.h / 2.0;
    for (int y = std::max(0, head.y); y < std::min(size.height, head.y + head.h); ++y)
      for (int x = std::max(0, head.x); x < std::min(size.width, head.x + head.w); ++x) {
        const double dx = (x + 0.5 - head.x - rx) / rx;
        const double dy = (y + 0.5 - head.y - ry) / ry;
        if (dx * dx + dy * dy <= 1.0) out.set_pixel(x, y, Rgba{236, 238, 244, 255});
      }
  }
  return out;
}

std::vector<std::shared_ptr<const Rgba8Frame>> load_background(const std::filesystem::path& dir, Size size) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("background directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no PNG frames in background directory " + dir.string());
  std::vector<std::shared_ptr<const Rgba8Frame>> frames;
  for (const auto& f : files) {
    Rgba8Frame img = premultiply(read_png(f));
    // Flatten onto opaque black so the background layer is fully opaque.
    for (int y = 0; y < img.height(); ++y) {
      std::uint8_t* p = img.row(y);
      for (int x = 0; x < img.width(); ++x) p[4 * x + 3] = 255;
    }
    if (img.size() != size) img = resize_bilinear(img, size);
    frames.push_back(std::make_shared<const Rgba8Frame>(std::move(img)));
  }
  return frames;
}

}  // namespace snowframe::compose
