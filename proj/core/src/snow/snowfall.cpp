#include "snowframe/snow/snowfall.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snowframe/errors.hpp"
#include "snowframe/pixel_math.hpp"

namespace snowframe::snow {

namespace {

void check_range(double lo, double hi, const char* name) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo <= hi)) {
    throw ValidationError(std::string("snow spawn range '") + name + "' is invalid");
  }
}

}  // namespace

void validate(const SnowParams& p) {
  if (!(p.spawn_rate >= 0.0) || !std::isfinite(p.spawn_rate)) {
    throw ValidationError("snow spawn_rate must be >= 0");
  }
  if (!(p.gravity >= 0.0) || !std::isfinite(p.gravity)) throw ValidationError("snow gravity must be >= 0");
  if (!std::isfinite(p.wind)) throw ValidationError("snow wind must be finite");
  if (p.bounds.width < 1 || p.bounds.height < 1) throw ValidationError("snow bounds must be at least 1x1");
  if (p.max_flakes < 1) throw ValidationError("snow max_flakes must be >= 1");
  const SpawnRanges& r = p.ranges;
  check_range(r.radius_min, r.radius_max, "radius");
  check_range(r.vx_min, r.vx_max, "vx");
  check_range(r.vy_min, r.vy_max, "vy");
  check_range(r.sway_amp_min, r.sway_amp_max, "sway_amp");
  check_range(r.sway_freq_min, r.sway_freq_max, "sway_freq");
  check_range(r.alpha_min, r.alpha_max, "alpha");
  if (r.radius_min <= 0.0) throw ValidationError("snow radius must be > 0");
  if (r.vy_min < 0.0) throw ValidationError("snow vy must be >= 0");
  if (r.alpha_min < 0.0 || r.alpha_max > 1.0) throw ValidationError("snow alpha must be in [0, 1]");
}

SnowState initial_snow_state(const SnowParams& params) {
  validate(params);
  SnowState s;
  s.rng = Xoshiro256(params.seed);
  return s;
}

void snow_step_inplace(SnowState& state, const SnowParams& params, double dt) {
  if (!(dt >= 0.0)) throw ValidationError("snow dt must be >= 0");
  if (dt == 0.0) return;

  const double width = params.bounds.width;
  const double height = params.bounds.height;
  const SpawnRanges& r = params.ranges;

  state.spawn_accumulator += params.spawn_rate * dt;
  const double whole = std::floor(state.spawn_accumulator);
  state.spawn_accumulator -= whole;
  for (std::uint64_t i = 0, n = static_cast<std::uint64_t>(whole); i < n; ++i) {
    if (state.flakes.size() >= static_cast<std::size_t>(params.max_flakes)) {
      state.suppressed += n - i;
      break;
    }
    Xoshiro256& g = state.rng;
    Snowflake f;
    f.x = g.uniform(0.0, width);
    f.radius = g.uniform(r.radius_min, r.radius_max);
    f.vx = g.uniform(r.vx_min, r.vx_max);
    f.vy = g.uniform(r.vy_min, r.vy_max);
    f.sway_amp = g.uniform(r.sway_amp_min, r.sway_amp_max);
    f.sway_freq = g.uniform(r.sway_freq_min, r.sway_freq_max);
    f.sway_phase = g.uniform(0.0, 2.0 * std::numbers::pi);
    f.alpha = g.uniform(r.alpha_min, r.alpha_max);
    f.y = -f.radius;
    state.flakes.push_back(f);
    ++state.spawned;
  }

  for (Snowflake& f : state.flakes) {
    f.vy += params.gravity * dt;
    const double sway = f.sway_amp * f.sway_freq * std::cos(f.sway_freq * state.time + f.sway_phase);
    f.x += (f.vx + params.wind + sway) * dt;
    f.y += f.vy * dt;
    if (f.x < 0.0 || f.x >= width) {
      f.x = std::fmod(f.x, width);
      if (f.x < 0.0) f.x += width;
      if (f.x >= width) f.x = 0.0;
    }
  }
  std::erase_if(state.flakes, [&](const Snowflake& f) { return f.y > height + f.radius; });
  state.time += dt;
}

SnowState snow_step(SnowState state, const SnowParams& params, double dt) {
  snow_step_inplace(state, params, dt);
  return state;
}

void snow_raster_into(Rgba8Frame& frame, const SnowState& state) {
  const int w = frame.width();
  const int h = frame.height();
  for (const Snowflake& f : state.flakes) {
    const int x0 = std::max(0, static_cast<int>(std::floor(f.x - f.radius)));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(f.x + f.radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(f.y - f.radius)));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(f.y + f.radius)));
    const double r2 = f.radius * f.radius;
    for (int y = y0; y <= y1; ++y) {
      std::uint8_t* row = frame.row(y);
      const double dy = y + 0.5 - f.y;
      for (int x = x0; x <= x1; ++x) {
        const double dx = x + 0.5 - f.x;
        const double k = 1.0 - (dx * dx + dy * dy) / r2;
        if (k <= 0.0) continue;
        const auto a = static_cast<std::uint8_t>(std::floor(255.0 * f.alpha * k + 0.5));
        if (a == 0) continue;
        std::uint8_t* p = row + 4 * x;
        for (int c = 0; c < 4; ++c) p[c] = pixel::over(a, p[c], a);
      }
    }
  }
}

Rgba8Frame snow_raster(const SnowState& state, Size size) {
  Rgba8Frame frame(size.width, size.height, true);
  snow_raster_into(frame, state);
  return frame;
}

}  // namespace snowframe::snow
