#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "snowframe/detect/detector.hpp"
#include "snowframe/geometry.hpp"

namespace snowframe::track {

/// Number of painted figures faces can be mapped onto.
inline constexpr int kSlotCount = 4;

struct TrackerParams {
  double iou_match_threshold = 0.3;
  int min_hits = 3;
  int max_misses = 15;
  double smoothing = 0.5;
  int slot_count = kSlotCount;
};

void validate(const TrackerParams& params);

struct FaceTrack {
  std::uint64_t id = 0;
  RectF rect;
  int hits = 0;    // consecutive frames matched
  int misses = 0;  // consecutive frames unmatched
  bool confirmed = false;
  std::optional<int> slot;

  Rect pixel_rect() const noexcept { return round_rect(rect); }
  friend bool operator==(const FaceTrack&, const FaceTrack&) = default;
};

/// Live tracks plus the id counter; ids are never reused within one state.
struct TrackerState {
  std::vector<FaceTrack> tracks;
  std::uint64_t next_id = 1;

  friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

struct Match {
  std::size_t track = 0;
  std::size_t detection = 0;
  double iou = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

/// Greedy assignment in descending IoU order (ties: lower track index, then
/// lower detection index). Pairs below `threshold` are never matched.
std::vector<Match> greedy_match(std::span<const FaceTrack> tracks,
                                std::span<const detect::Detection> detections, double threshold);

/// Advances the tracks by one frame of detections.
void update_tracks(TrackerState& state, std::span<const detect::Detection> detections,
                   const TrackerParams& params);

/// Gives free slots to confirmed slotless tracks, largest first, each taking
/// the lowest free index. Slots already held are never moved.
void assign_slots(TrackerState& state, const TrackerParams& params);

/// Track occupying each slot, if any.
std::array<std::optional<FaceTrack>, kSlotCount> slot_view(const TrackerState& state);

/// Convenience wrapper owning a TrackerState.
class Tracker {
 public:
  explicit Tracker(TrackerParams params = {});

  /// update_tracks followed by assign_slots.
  void step(std::span<const detect::Detection> detections);

  const TrackerState& state() const noexcept { return state_; }
  void restore(TrackerState state) { state_ = std::move(state); }
  const TrackerParams& params() const noexcept { return params_; }
  std::array<std::optional<FaceTrack>, kSlotCount> slots() const { return slot_view(state_); }

 private:
  TrackerParams params_;
  TrackerState state_;
};

}  // namespace snowframe::track
