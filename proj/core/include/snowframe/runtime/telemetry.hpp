#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>

#include "snowframe/geometry.hpp"
#include "snowframe/runtime/lifecycle.hpp"
#include "snowframe/track/tracker.hpp"

namespace snowframe::runtime {

struct SlotReport {
  std::uint64_t track_id = 0;
  Rect rect;  // camera pixels

  friend bool operator==(const SlotReport&, const SlotReport&) = default;
};

/// Health snapshot; a plain value safe to copy across threads.
struct Telemetry {
  EngineState state;
  double fps_out = 0.0;
  double detect_hz = 0.0;
  double temp_c = 0.0;
  bool fan = true;
  int face_count = 0;
  std::array<std::optional<SlotReport>, track::kSlotCount> slots{};
  double uptime_s = 0.0;
  std::uint64_t frames_composed = 0;
  std::uint64_t frames_captured = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t detections_run = 0;
  std::optional<std::chrono::system_clock::time_point> last_frame_at;
  Size camera{0, 0};  // size of the latest camera frame, 0x0 before the first

  std::array<bool, track::kSlotCount> slot_occupancy() const {
    std::array<bool, track::kSlotCount> o{};
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = slots[i].has_value();
    return o;
  }
};

}  // namespace snowframe::runtime
