#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "snowframe/geometry.hpp"
#include "snowframe/image.hpp"

namespace snowframe::testing {

inline std::filesystem::path source_dir() { return SNOWFRAME_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& rel) {
  return source_dir() / "tests" / "fixtures" / rel;
}
inline std::filesystem::path data(const std::string& rel) { return source_dir() / "data" / rel; }
inline std::filesystem::path stock_cascade() {
  return data("cascades/haarcascade_frontalface_default.xml");
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline GrayImage random_gray(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> d(0, 255);
  GrayImage img(w, h);
  for (auto& s : img.samples()) s = static_cast<std::uint8_t>(d(rng));
  return img;
}

/// Random premultiplied pixels.
inline Rgba8Frame random_premultiplied(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> d(0, 255);
  Rgba8Frame f(w, h, true);
  std::uint8_t* p = f.data();
  for (int i = 0; i < w * h; ++i, p += 4) {
    const int a = d(rng);
    p[3] = static_cast<std::uint8_t>(a);
    for (int c = 0; c < 3; ++c) p[c] = static_cast<std::uint8_t>(a == 0 ? 0 : d(rng) % (a + 1));
  }
  return f;
}

/// Naive double-loop sum over [x0,x1) x [y0,y1).
inline std::int64_t naive_sum(const GrayImage& img, int x0, int y0, int x1, int y1,
                              bool squared = false) {
  std::int64_t s = 0;
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      const std::int64_t v = img.at(x, y);
      s += squared ? v * v : v;
    }
  return s;
}

/// Gray image with a gray-converted copy of `patch` pasted at `at`, over a
/// flat background.
inline GrayImage paste_gray(Size canvas, std::uint8_t background, const GrayImage& patch, Point at) {
  GrayImage img(canvas.width, canvas.height, background);
  for (int y = 0; y < patch.height(); ++y)
    for (int x = 0; x < patch.width(); ++x) {
      const int cx = at.x + x;
      const int cy = at.y + y;
      if (cx >= 0 && cy >= 0 && cx < canvas.width && cy < canvas.height) img.at(cx, cy) = patch.at(x, y);
    }
  return img;
}

}  // namespace snowframe::testing
