#include <cmath>
#include <random>

#include "doctest.h"
#include "snowframe/errors.hpp"
#include "snowframe/snow/snowfall.hpp"

using namespace snowframe;
using namespace snowframe::snow;

namespace {

SnowParams small_params() {
  SnowParams p;
  p.bounds = {160, 100};
  p.spawn_rate = 30.0;
  p.max_flakes = 200;
  p.seed = 77;
  return p;
}

// Independent per-pixel evaluation of the disc stack.
Rgba8Frame raster_oracle(const SnowState& s, Size size) {
  Rgba8Frame out(size.width, size.height, true);
  for (int y = 0; y < size.height; ++y)
    for (int x = 0; x < size.width; ++x) {
      std::int64_t px[4] = {0, 0, 0, 0};
      for (const auto& f : s.flakes) {
        const double d2 = (x + 0.5 - f.x) * (x + 0.5 - f.x) + (y + 0.5 - f.y) * (y + 0.5 - f.y);
        const double a = f.alpha * std::max(0.0, 1.0 - d2 / (f.radius * f.radius));
        const std::int64_t a8 = static_cast<std::int64_t>(std::floor(255.0 * a + 0.5));
        for (auto& v : px) {
          const std::int64_t num = v * (255 - a8);
          v = a8 + num / 255 + ((num % 255) * 2 >= 255 ? 1 : 0);
        }
      }
      out.set_pixel(x, y, Rgba{std::uint8_t(px[0]), std::uint8_t(px[1]), std::uint8_t(px[2]), std::uint8_t(px[3])});
    }
  return out;
}

}  // namespace

TEST_CASE("generator matches published xoshiro256** and splitmix64 outputs") {
  std::uint64_t sm = 0;
  CHECK(splitmix64(sm) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(sm) == 0x6e789e6aa1b965f4ULL);
  auto g = Xoshiro256::from_state({1, 2, 3, 4});
  CHECK(g.next() == 11520ULL);
  CHECK(g.next() == 0ULL);
  CHECK(g.next() == 1509978240ULL);
  CHECK(g.next() == 1215971899390074240ULL);
  Xoshiro256 u(5);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("dt = 0 leaves the state bit-identical") {
  const SnowParams p = small_params();
  SnowState s = initial_snow_state(p);
  for (int i = 0; i < 50; ++i) snow_step_inplace(s, p, 1.0 / 30);
  REQUIRE_FALSE(s.flakes.empty());
  CHECK(snow_step(s, p, 0.0) == s);
}

TEST_CASE("semi-implicit Euler: velocity first, then position") {
  SnowParams p = small_params();
  p.spawn_rate = 0.0;
  p.wind = 0.0;
  p.gravity = 1.0;
  p.bounds = {100, 100};
  SnowState s = initial_snow_state(p);
  Snowflake f;
  f.x = 50.0;
  f.y = 10.0;
  f.radius = 2.0;
  f.sway_amp = 0.0;
  f.sway_freq = 1.0;
  s.flakes.push_back(f);
  s = snow_step(s, p, 1.0);
  CHECK(s.flakes[0].vy == 1.0);
  CHECK(s.flakes[0].y == 11.0);
  s = snow_step(s, p, 1.0);
  CHECK(s.flakes[0].vy == 2.0);
  CHECK(s.flakes[0].y == 13.0);
  CHECK(s.flakes[0].x == 50.0);
  CHECK(s.time == 2.0);
}

TEST_CASE("sway uses the time at the start of the step") {
  SnowParams p = small_params();
  p.spawn_rate = 0.0;
  p.wind = 3.0;
  p.gravity = 0.0;
  SnowState s = initial_snow_state(p);
  s.time = 0.25;
  Snowflake f;
  f.x = 40.0;
  f.y = 20.0;
  f.vx = 1.0;
  f.sway_amp = 4.0;
  f.sway_freq = 2.0;
  f.sway_phase = 0.5;
  s.flakes.push_back(f);
  s = snow_step(s, p, 0.1);
  CHECK(s.flakes[0].x == doctest::Approx(40.0 + (1.0 + 3.0 + 8.0 * std::cos(2.0 * 0.25 + 0.5)) * 0.1));
}

TEST_CASE("spawn count follows the floor-accumulated rule") {
  SnowParams p = small_params();
  p.spawn_rate = 10.0;
  p.max_flakes = 10000;
  SnowState s = initial_snow_state(p);
  double acc = 0.0;
  std::uint64_t expected = 0;
  for (int i = 0; i < 1000; ++i) {
    snow_step_inplace(s, p, 0.016);
    acc += 10.0 * 0.016;
    const double n = std::floor(acc);
    acc -= n;
    expected += static_cast<std::uint64_t>(n);
  }
  CHECK(s.spawned == expected);
  CHECK(s.suppressed == 0);
  CHECK(s.spawn_accumulator == doctest::Approx(acc));
  const double total = 10.0 * 0.016 * 1000;
  CHECK(std::abs(s.spawned + s.spawn_accumulator - total) <= 1e-6 * total);
}

TEST_CASE("random dt sequences keep bound, containment and conservation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dt_dist(0.0, 0.1);
  for (int run = 0; run < 20; ++run) {
    SnowParams p = small_params();
    p.max_flakes = 1 + run * 3;
    p.spawn_rate = 5.0 + run * 10.0;
    p.seed = run;
    SnowState s = initial_snow_state(p);
    double budget = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double dt = i % 17 == 0 ? 0.0 : dt_dist(rng);
      snow_step_inplace(s, p, dt);
      budget += p.spawn_rate * dt;
      REQUIRE(s.flakes.size() <= static_cast<std::size_t>(p.max_flakes));
      for (const auto& f : s.flakes) {
        REQUIRE(f.y >= -f.radius);
        REQUIRE(f.y <= p.bounds.height + f.radius);
        REQUIRE(f.x >= 0.0);
        REQUIRE(f.x < p.bounds.width);
        REQUIRE(f.radius > 0.0);
        REQUIRE(f.alpha >= 0.0);
        REQUIRE(f.alpha <= 1.0);
      }
      const double emitted = static_cast<double>(s.spawned + s.suppressed) + s.spawn_accumulator;
      REQUIRE(std::abs(emitted - budget) <= 1e-6 * std::max(1.0, budget));
    }
  }
}

TEST_CASE("same seed and dt sequence give identical states and rasters") {
  const SnowParams p = small_params();
  SnowState a = initial_snow_state(p), b = initial_snow_state(p);
  for (int i = 0; i < 300; ++i) {
    const double dt = (i % 3 + 1) / 60.0;
    snow_step_inplace(a, p, dt);
    snow_step_inplace(b, p, dt);
  }
  CHECK(a == b);
  CHECK(snow_raster(a, p.bounds) == snow_raster(b, p.bounds));
  SnowParams q = p;
  q.seed = p.seed + 1;
  SnowState c = initial_snow_state(q);
  for (int i = 0; i < 300; ++i) snow_step_inplace(c, q, (i % 3 + 1) / 60.0);
  CHECK_FALSE(c.flakes == a.flakes);
}

TEST_CASE("spawned flakes start above the top edge with attributes in range") {
  SnowParams p = small_params();
  p.spawn_rate = 1000.0;
  p.gravity = 0.0;
  SnowState s = initial_snow_state(p);
  snow_step_inplace(s, p, 1e-3);
  REQUIRE(s.flakes.size() == 1);
  const Snowflake& f = s.flakes[0];
  CHECK(f.y == doctest::Approx(-f.radius + f.vy * 1e-3));
  CHECK(f.radius >= 1.5);
  CHECK(f.radius < 4.0);
  CHECK(f.vy >= 20.0);
  CHECK(f.vy < 60.0);
}

TEST_CASE("raster") {
  SUBCASE("empty state is fully transparent") {
    SnowState s;
    const Rgba8Frame f = snow_raster(s, {20, 10});
    for (auto v : f.pixels()) REQUIRE(v == 0);
  }
  SUBCASE("disc center alpha is round(255 * alpha)") {
    SnowState s;
    Snowflake f;
    f.x = 10.5;
    f.y = 5.5;
    f.radius = 3.0;
    f.alpha = 0.7;
    s.flakes.push_back(f);
    const Rgba8Frame out = snow_raster(s, {20, 10});
    CHECK(out.pixel(10, 5) == Rgba{179, 179, 179, 179});
    CHECK(out.pixel(14, 5) == Rgba{});
  }
  SUBCASE("random flakes match the per-pixel oracle") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ux(-5.0, 85.0), uy(-5.0, 65.0), ur(0.5, 6.0), ua(0.0, 1.0);
    for (int t = 0; t < 5; ++t) {
      SnowState s;
      for (int i = 0; i < 100; ++i) {
        Snowflake f;
        f.x = ux(rng);
        f.y = uy(rng);
        f.radius = ur(rng);
        f.alpha = ua(rng);
        s.flakes.push_back(f);
      }
      const Rgba8Frame got = snow_raster(s, {80, 60});
      REQUIRE(got == raster_oracle(s, {80, 60}));
      REQUIRE(is_valid_premultiplied(got));
    }
  }
}

TEST_CASE("invalid snow parameters are rejected") {
  SnowParams p;
  p.spawn_rate = -1.0;
  CHECK_THROWS_AS(initial_snow_state(p), ValidationError);
  p = {};
  p.max_flakes = 0;
  CHECK_THROWS_AS(initial_snow_state(p), ValidationError);
  p = {};
  p.ranges.radius_min = 0.0;
  CHECK_THROWS_AS(initial_snow_state(p), ValidationError);
  p = {};
  SnowState s = initial_snow_state(p);
  CHECK_THROWS_AS(snow_step_inplace(s, p, -0.1), ValidationError);
}
