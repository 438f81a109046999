#include "snowframe/track/tracker.hpp"

#include <algorithm>

#include "snowframe/errors.hpp"

namespace snowframe::track {

void validate(const TrackerParams& p) {
  if (!(p.iou_match_threshold > 0.0 && p.iou_match_threshold < 1.0)) {
    throw ValidationError("iou_match_threshold must lie in (0, 1)");
  }
  if (p.min_hits < 1) throw ValidationError("min_hits must be >= 1");
  if (p.max_misses < 0) throw ValidationError("max_misses must be >= 0");
  if (!(p.smoothing >= 0.0 && p.smoothing <= 1.0)) {
    throw ValidationError("smoothing must lie in [0, 1]");
  }
  if (p.slot_count != kSlotCount) throw ValidationError("slot_count is fixed at 4");
}

std::vector<Match> greedy_match(std::span<const FaceTrack> tracks,
                                std::span<const detect::Detection> detections, double threshold) {
  std::vector<Match> candidates;
  for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
    for (std::size_t di = 0; di < detections.size(); ++di) {
      const double v = iou(tracks[ti].rect, to_rectf(detections[di].rect));
      if (v >= threshold) candidates.push_back(Match{ti, di, v});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Match& a, const Match& b) { return a.iou > b.iou; });
  std::vector<bool> track_used(tracks.size(), false);
  std::vector<bool> det_used(detections.size(), false);
  std::vector<Match> out;
  for (const Match& m : candidates) {
    if (track_used[m.track] || det_used[m.detection]) continue;
    track_used[m.track] = true;
    det_used[m.detection] = true;
    out.push_back(m);
  }
  return out;
}

void update_tracks(TrackerState& state, std::span<const detect::Detection> detections,
                   const TrackerParams& params) {
  validate(params);
  const auto matches = greedy_match(state.tracks, detections, params.iou_match_threshold);
  std::vector<bool> matched_track(state.tracks.size(), false);
  std::vector<bool> matched_det(detections.size(), false);
  const double a = params.smoothing;
  for (const Match& m : matches) {
    FaceTrack& t = state.tracks[m.track];
    const RectF d = to_rectf(detections[m.detection].rect);
    t.rect = RectF{a * d.x + (1 - a) * t.rect.x, a * d.y + (1 - a) * t.rect.y,
                   a * d.w + (1 - a) * t.rect.w, a * d.h + (1 - a) * t.rect.h};
    ++t.hits;
    t.misses = 0;
    matched_track[m.track] = true;
    matched_det[m.detection] = true;
  }
  for (std::size_t i = 0; i < state.tracks.size(); ++i) {
    if (matched_track[i]) continue;
    ++state.tracks[i].misses;
    state.tracks[i].hits = 0;
  }
  std::erase_if(state.tracks,
                [&](const FaceTrack& t) { return t.misses > params.max_misses; });

  for (std::size_t di = 0; di < detections.size(); ++di) {
    if (matched_det[di]) continue;
    FaceTrack t;
    t.id = state.next_id++;
    t.rect = to_rectf(detections[di].rect);
    t.hits = 1;
    state.tracks.push_back(t);
  }
  for (FaceTrack& t : state.tracks) {
    if (t.hits >= params.min_hits) t.confirmed = true;
  }
}

void assign_slots(TrackerState& state, const TrackerParams& params) {
  std::array<bool, kSlotCount> taken{};
  for (const FaceTrack& t : state.tracks) {
    if (t.slot) taken[static_cast<std::size_t>(*t.slot)] = true;
  }
  std::vector<FaceTrack*> waiting;
  for (FaceTrack& t : state.tracks) {
    if (t.confirmed && !t.slot) waiting.push_back(&t);
  }
  std::stable_sort(waiting.begin(), waiting.end(), [](const FaceTrack* a, const FaceTrack* b) {
    if (a->rect.area() != b->rect.area()) return a->rect.area() > b->rect.area();
    return a->id < b->id;
  });
  for (FaceTrack* t : waiting) {
    for (int s = 0; s < params.slot_count; ++s) {
      if (!taken[static_cast<std::size_t>(s)]) {
        taken[static_cast<std::size_t>(s)] = true;
        t->slot = s;
        break;
      }
    }
  }
}

std::array<std::optional<FaceTrack>, kSlotCount> slot_view(const TrackerState& state) {
  std::array<std::optional<FaceTrack>, kSlotCount> out;
  for (const FaceTrack& t : state.tracks) {
    if (t.slot) out[static_cast<std::size_t>(*t.slot)] = t;
  }
  return out;
}

Tracker::Tracker(TrackerParams params) : params_(params) { validate(params_); }

void Tracker::step(std::span<const detect::Detection> detections) {
  update_tracks(state_, detections, params_);
  assign_slots(state_, params_);
}

}  // namespace snowframe::track
