#include "snowframe/detect/integral.hpp"

#include "snowframe/errors.hpp"

namespace snowframe::detect {

IntegralPair integral_images(const GrayImage& img) {
  IntegralPair ii;
  ii.width = img.width();
  ii.height = img.height();
  const std::size_t stride = static_cast<std::size_t>(ii.stride());
  const std::size_t cells = stride * (static_cast<std::size_t>(ii.height) + 1);
  ii.sum.assign(cells, 0);
  ii.sqsum.assign(cells, 0);
  for (int y = 0; y < ii.height; ++y) {
    const auto row = img.row(y);
    std::int64_t run = 0;
    std::int64_t sqrun = 0;
    const std::int64_t* above = ii.sum.data() + static_cast<std::size_t>(y) * stride;
    const std::int64_t* sqabove = ii.sqsum.data() + static_cast<std::size_t>(y) * stride;
    std::int64_t* out = ii.sum.data() + static_cast<std::size_t>(y + 1) * stride;
    std::int64_t* sqout = ii.sqsum.data() + static_cast<std::size_t>(y + 1) * stride;
    for (int x = 0; x < ii.width; ++x) {
      const std::int64_t v = row[x];
      run += v;
      sqrun += v * v;
      out[x + 1] = above[x + 1] + run;
      sqout[x + 1] = sqabove[x + 1] + sqrun;
    }
  }
  return ii;
}

namespace {

void check(const IntegralPair& ii, const Rect& r) {
  if (r.x < 0 || r.y < 0 || r.w < 0 || r.h < 0 || r.x + r.w > ii.width ||
      r.y + r.h > ii.height) {
    throw BoundsError("rectangle outside integral table");
  }
}

std::int64_t box(const std::vector<std::int64_t>& t, int stride, const Rect& r) {
  const auto at = [&](int x, int y) { return t[static_cast<std::size_t>(y) * stride + x]; };
  return at(r.x + r.w, r.y + r.h) - at(r.x + r.w, r.y) - at(r.x, r.y + r.h) + at(r.x, r.y);
}

}  // namespace

std::int64_t rect_sum(const IntegralPair& ii, const Rect& rect) {
  check(ii, rect);
  return box(ii.sum, ii.stride(), rect);
}

std::int64_t rect_sqsum(const IntegralPair& ii, const Rect& rect) {
  check(ii, rect);
  return box(ii.sqsum, ii.stride(), rect);
}

}  // namespace snowframe::detect
