#include <random>

#include "doctest.h"
#include "snowframe/detect/integral.hpp"
#include "snowframe/errors.hpp"
#include "support/test_support.hpp"

using namespace snowframe;
using namespace snowframe::detect;
namespace t = snowframe::testing;

TEST_CASE("all-zero image gives all-zero tables") {
  const IntegralPair ii = integral_images(GrayImage(4, 4, 0));
  CHECK(ii.sum.size() == 25);
  for (auto v : ii.sum) CHECK(v == 0);
  for (auto v : ii.sqsum) CHECK(v == 0);
}

TEST_CASE("2x2 image") {
  const IntegralPair ii = integral_images(GrayImage(2, 2, {1, 2, 3, 4}));
  CHECK(ii.sum_at(1, 1) == 1);
  CHECK(ii.sum_at(2, 1) == 3);
  CHECK(ii.sum_at(1, 2) == 4);
  CHECK(ii.sum_at(2, 2) == 10);
  CHECK(ii.sqsum_at(2, 2) == 30);
  for (int i = 0; i <= 2; ++i) {
    CHECK(ii.sum_at(i, 0) == 0);
    CHECK(ii.sum_at(0, i) == 0);
  }
  CHECK(rect_sum(ii, Rect{0, 0, 2, 2}) == 10);
  CHECK(rect_sum(ii, Rect{1, 0, 0, 2}) == 0);
  CHECK(rect_sum(ii, Rect{1, 1, 1, 1}) == 4);
}

TEST_CASE("random 64x64 image matches brute force at every entry") {
  std::mt19937_64 rng(64);
  const GrayImage img = t::random_gray(rng, 64, 64);
  const IntegralPair ii = integral_images(img);
  for (int y = 0; y <= 64; ++y)
    for (int x = 0; x <= 64; ++x) {
      REQUIRE(ii.sum_at(x, y) == t::naive_sum(img, 0, 0, x, y));
      REQUIRE(ii.sqsum_at(x, y) == t::naive_sum(img, 0, 0, x, y, true));
    }
}

TEST_CASE("table shape invariants") {
  std::mt19937_64 rng(7);
  const GrayImage img = t::random_gray(rng, 37, 23);
  const IntegralPair ii = integral_images(img);
  for (int y = 0; y <= 23; ++y)
    for (int x = 0; x < 37; ++x) CHECK(ii.sum_at(x, y) <= ii.sum_at(x + 1, y));
  for (int x = 0; x <= 37; ++x)
    for (int y = 0; y < 23; ++y) CHECK(ii.sum_at(x, y) <= ii.sum_at(x, y + 1));
  CHECK(ii.sum_at(37, 23) == t::naive_sum(img, 0, 0, 37, 23));
}

TEST_CASE("rect_sum matches naive loops on random rectangles") {
  std::mt19937_64 rng(32);
  const GrayImage img = t::random_gray(rng, 32, 32);
  const IntegralPair ii = integral_images(img);
  std::uniform_int_distribution<int> d(0, 32);
  for (int i = 0; i < 500; ++i) {
    int x0 = d(rng), x1 = d(rng), y0 = d(rng), y1 = d(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const Rect r{x0, y0, x1 - x0, y1 - y0};
    REQUIRE(rect_sum(ii, r) == t::naive_sum(img, x0, y0, x1, y1));
    REQUIRE(rect_sqsum(ii, r) == t::naive_sum(img, x0, y0, x1, y1, true));
  }
}

TEST_CASE("rect_sum splits additively") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 48);
  for (int iter = 0; iter < 200; ++iter) {
    const int w = dim(rng), h = dim(rng);
    const GrayImage img = t::random_gray(rng, w, h);
    const IntegralPair ii = integral_images(img);
    std::uniform_int_distribution<int> dx(0, w), dy(0, h);
    int x0 = dx(rng), x1 = dx(rng), y0 = dy(rng), y1 = dy(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const Rect whole{x0, y0, x1 - x0, y1 - y0};
    const int sx = x0 + (whole.w > 0 ? static_cast<int>(rng() % (whole.w + 1)) : 0);
    const int sy = y0 + (whole.h > 0 ? static_cast<int>(rng() % (whole.h + 1)) : 0);
    REQUIRE(rect_sum(ii, whole) ==
            rect_sum(ii, Rect{x0, y0, sx - x0, whole.h}) + rect_sum(ii, Rect{sx, y0, x1 - sx, whole.h}));
    REQUIRE(rect_sum(ii, whole) ==
            rect_sum(ii, Rect{x0, y0, whole.w, sy - y0}) + rect_sum(ii, Rect{x0, sy, whole.w, y1 - sy}));
  }
}

TEST_CASE("out-of-bounds rectangles are rejected") {
  const IntegralPair ii = integral_images(GrayImage(4, 3, 1));
  CHECK_THROWS_AS(rect_sum(ii, Rect{0, 0, 5, 1}), BoundsError);
  CHECK_THROWS_AS(rect_sum(ii, Rect{-1, 0, 1, 1}), BoundsError);
  CHECK_THROWS_AS(rect_sum(ii, Rect{0, 2, 1, 2}), BoundsError);
  CHECK_THROWS_AS(rect_sum(ii, Rect{1, 1, -1, 1}), BoundsError);
  CHECK(rect_sum(ii, Rect{4, 3, 0, 0}) == 0);
}

TEST_CASE("largest supported image holds exact totals") {
  // 255 everywhere on 8192x8192 would need 1 GiB of tables; check the
  // arithmetic headroom instead.
  const std::int64_t max_sum = 255LL * 8192 * 8192;
  const std::int64_t max_sq = 255LL * 255 * 8192 * 8192;
  CHECK(max_sum < (1LL << 62));
  CHECK(max_sq < (1LL << 62));
  const IntegralPair ii = integral_images(GrayImage(1024, 512, 255));
  CHECK(ii.sum_at(1024, 512) == 255LL * 1024 * 512);
  CHECK(ii.sqsum_at(1024, 512) == 255LL * 255 * 1024 * 512);
}
