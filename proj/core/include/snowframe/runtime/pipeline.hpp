#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "snowframe/compose/compose.hpp"
#include "snowframe/detect/cascade.hpp"
#include "snowframe/detect/detector.hpp"
#include "snowframe/runtime/config.hpp"
#include "snowframe/runtime/sink.hpp"
#include "snowframe/runtime/source.hpp"
#include "snowframe/snow/snowfall.hpp"
#include "snowframe/track/tracker.hpp"

namespace snowframe::runtime {

struct DetectionResult {
  double frame_timestamp = 0.0;
  Size camera;
  Size gray;
  std::vector<detect::Detection> detections;  // camera coordinates
};

struct TickResult {
  bool captured = false;
  bool detected = false;
  bool composed = false;
  bool end_of_stream = false;
  std::uint64_t dropped = 0;
};

struct PipelineCounters {
  std::uint64_t frames_captured = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t frames_composed = 0;
  std::uint64_t detections_run = 0;
};

/// The capture -> detect -> track -> compose -> sink chain. Stage methods can
/// be driven from separate threads (capture, detect, render) or all at once
/// through tick().
class Pipeline {
 public:
  struct Components {
    std::unique_ptr<FrameSource> source;
    std::unique_ptr<FrameSink> sink;
    std::shared_ptr<const detect::CascadeModel> cascade;
    /// Background frames at the output size; empty selects the procedural one.
    std::vector<std::shared_ptr<const Rgba8Frame>> background;
  };

  Pipeline(const EngineConfig& config, Components components);

  // Lifecycle hooks.
  void open_source(double now);
  void close_source();
  void open_sink();
  void flush_sink();
  void close_sink();
  /// Anchors background and detect cadence timing at `now`.
  void start(double now);
  /// Continues after a pause without a snow jump over the gap.
  void resume(double now);

  /// Capture stage: newest source frame (mirrored if configured).
  ReadResult capture(double now);
  /// Detect stage: pure function of the frame.
  DetectionResult detect(const CapturedFrame& frame) const;
  /// Feeds one detection result to the tracker.
  void apply_detections(const DetectionResult& result);
  /// Render stage: snow, background, sprites, composite, sink.
  void compose(double now);

  /// Deterministic single-threaded step of every stage at time `now`.
  TickResult tick(double now);

  track::TrackerState tracker_state() const;
  void restore_tracker(track::TrackerState state);
  std::array<std::optional<track::FaceTrack>, track::kSlotCount> slots() const;

  std::shared_ptr<const Rgba8Frame> latest_frame() const;
  std::shared_ptr<const Rgba8Frame> latest_camera() const;
  std::optional<double> latest_camera_timestamp() const;
  PipelineCounters counters() const;
  const snow::SnowState& snow_state() const noexcept { return snow_; }
  bool source_open() const;
  const FrameSink& sink() const noexcept { return *sink_; }
  FrameSink& sink() noexcept { return *sink_; }
  const FrameSource& source() const noexcept { return *source_; }
  const compose::SlotGeometry& geometry() const noexcept { return geometry_; }

  /// Seconds of snowfall simulated before the first frame.
  static constexpr double kSnowPrewarm = 8.0;

 private:
  std::shared_ptr<const Rgba8Frame> background_at(double now) const;

  EngineConfig config_;
  compose::SlotGeometry geometry_;
  std::unique_ptr<FrameSource> source_;
  std::unique_ptr<FrameSink> sink_;
  std::shared_ptr<const detect::CascadeModel> cascade_;
  std::vector<std::shared_ptr<const Rgba8Frame>> background_;
  snow::SnowParams snow_params_;

  // Render-stage state.
  snow::SnowState snow_;
  std::optional<double> last_compose_;
  double clock_origin_ = 0.0;
  double next_detect_ = 0.0;
  std::optional<double> last_detected_ts_;

  mutable std::mutex mu_;  // guards the members below
  track::Tracker tracker_;
  CapturedFrame camera_;
  std::shared_ptr<const Rgba8Frame> output_;
  PipelineCounters counters_;
};

/// Detection rect from a downscaled gray image mapped back to camera pixels.
Rect scale_to_camera(const Rect& r, Size gray, Size camera);

}  // namespace snowframe::runtime
