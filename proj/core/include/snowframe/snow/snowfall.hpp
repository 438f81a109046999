#pragma once

#include <cstdint>
#include <vector>

#include "snowframe/geometry.hpp"
#include "snowframe/image.hpp"
#include "snowframe/snow/rng.hpp"

namespace snowframe::snow {

struct Snowflake {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;  // px/s, excluding wind and sway
  double vy = 0.0;  // px/s, downwards
  double radius = 1.0;
  double sway_amp = 0.0;    // px
  double sway_freq = 0.0;   // rad/s
  double sway_phase = 0.0;  // rad
  double alpha = 1.0;

  friend bool operator==(const Snowflake&, const Snowflake&) = default;
};

/// Half-open uniform ranges new flakes draw from, in draw order after x.
struct SpawnRanges {
  double radius_min = 1.5, radius_max = 4.0;
  double vx_min = -10.0, vx_max = 10.0;
  double vy_min = 20.0, vy_max = 60.0;
  double sway_amp_min = 2.0, sway_amp_max = 12.0;
  double sway_freq_min = 0.5, sway_freq_max = 2.0;
  double alpha_min = 0.5, alpha_max = 1.0;
};

struct SnowParams {
  double spawn_rate = 60.0;  // flakes/s
  double gravity = 4.0;      // px/s^2
  double wind = 6.0;         // px/s
  Size bounds{1280, 800};
  int max_flakes = 600;
  std::uint64_t seed = 1;
  SpawnRanges ranges;
};

void validate(const SnowParams& params);

struct SnowState {
  std::vector<Snowflake> flakes;
  Xoshiro256 rng;
  double time = 0.0;
  double spawn_accumulator = 0.0;
  std::uint64_t spawned = 0;     // flakes created
  std::uint64_t suppressed = 0;  // spawns dropped at max_flakes

  friend bool operator==(const SnowState&, const SnowState&) = default;
};

SnowState initial_snow_state(const SnowParams& params);

/// Advances one step: spawn from the accumulator, then semi-implicit Euler,
/// then removal of flakes below the bottom edge. x wraps around the width.
void snow_step_inplace(SnowState& state, const SnowParams& params, double dt);

SnowState snow_step(SnowState state, const SnowParams& params, double dt);

/// Transparent premultiplied frame with one soft white disc per flake.
Rgba8Frame snow_raster(const SnowState& state, Size size);

/// Draws the flakes onto an existing premultiplied frame.
void snow_raster_into(Rgba8Frame& frame, const SnowState& state);

}  // namespace snowframe::snow
