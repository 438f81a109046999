#include "snowframe/runtime/pipeline.hpp"

#include <cmath>

#include "snowframe/compose/background.hpp"
#include "snowframe/errors.hpp"

namespace snowframe::runtime {

Rect scale_to_camera(const Rect& r, Size gray, Size camera) {
  const double sx = static_cast<double>(camera.width) / gray.width;
  const double sy = static_cast<double>(camera.height) / gray.height;
  return round_rect(RectF{r.x * sx, r.y * sy, r.w * sx, r.h * sy});
}

Pipeline::Pipeline(const EngineConfig& config, Components c)
    : config_(config),
      geometry_(config.slot_geometry()),
      source_(std::move(c.source)),
      sink_(std::move(c.sink)),
      cascade_(std::move(c.cascade)),
      background_(std::move(c.background)),
      snow_params_(config.snow_params()),
      tracker_(config.tracker) {
  if (!source_) throw ValidationError("pipeline needs a frame source");
  if (!sink_) throw ValidationError("pipeline needs a frame sink");
  if (!cascade_) throw ValidationError("pipeline needs a cascade");
  detect::validate(*cascade_);
  const Size& cap = config_.pipeline.capture;
  const auto gw = static_cast<int>(std::floor(cap.width * config_.pipeline.detect_downscale));
  const auto gh = static_cast<int>(std::floor(cap.height * config_.pipeline.detect_downscale));
  if (gw < cascade_->window_width || gh < cascade_->window_height) {
    throw ConfigError("downscaled capture " + std::to_string(gw) + "x" + std::to_string(gh) +
                      " is smaller than the cascade window");
  }
  if (background_.empty()) {
    background_.push_back(std::make_shared<const Rgba8Frame>(
        compose::procedural_background(config_.pipeline.output, geometry_)));
  }
  for (const auto& bg : background_) {
    if (!bg || bg->size() != config_.pipeline.output) {
      throw ValidationError("background frames must match the output size");
    }
  }
  snow_ = snow::initial_snow_state(snow_params_);
  const double dt = 1.0 / config_.pipeline.output_fps;
  const auto steps = static_cast<int>(std::lround(kSnowPrewarm / dt));
  for (int i = 0; i < steps; ++i) snow::snow_step_inplace(snow_, snow_params_, dt);
}

void Pipeline::open_source(double now) { source_->open(now); }
void Pipeline::close_source() { source_->close(); }
bool Pipeline::source_open() const { return source_->is_open(); }
void Pipeline::open_sink() { sink_->open(); }
void Pipeline::flush_sink() { sink_->flush(); }
void Pipeline::close_sink() { sink_->close(); }

void Pipeline::start(double now) {
  clock_origin_ = now;
  next_detect_ = now;
  last_compose_.reset();
}

void Pipeline::resume(double now) {
  next_detect_ = now;
  if (last_compose_) last_compose_ = now;
}

ReadResult Pipeline::capture(double now) {
  ReadResult r = source_->read(now);
  std::lock_guard lock(mu_);
  counters_.frames_dropped += r.dropped;
  if (r.frame) {
    if (config_.mirror()) {
      r.frame->frame = std::make_shared<const Rgba8Frame>(mirror_horizontal(*r.frame->frame));
    }
    camera_ = *r.frame;
    ++counters_.frames_captured;
  }
  return r;
}

DetectionResult Pipeline::detect(const CapturedFrame& frame) const {
  DetectionResult out;
  out.frame_timestamp = frame.timestamp;
  out.camera = frame.frame->size();
  const GrayImage gray = to_gray_downscaled(*frame.frame, config_.pipeline.detect_downscale);
  out.gray = gray.size();
  if (gray.width() < cascade_->window_width || gray.height() < cascade_->window_height) return out;
  out.detections = detect::detect_multiscale(*cascade_, gray, config_.detector);
  for (auto& d : out.detections) d.rect = scale_to_camera(d.rect, out.gray, out.camera);
  return out;
}

void Pipeline::apply_detections(const DetectionResult& result) {
  std::lock_guard lock(mu_);
  tracker_.step(result.detections);
  ++counters_.detections_run;
}

std::shared_ptr<const Rgba8Frame> Pipeline::background_at(double now) const {
  const double t = std::max(0.0, now - clock_origin_);
  const auto idx = static_cast<std::uint64_t>(std::floor(t * config_.background.fps + 1e-9));
  return background_[idx % background_.size()];
}

void Pipeline::compose(double now) {
  const double dt = last_compose_ ? std::max(0.0, now - *last_compose_) : 0.0;
  snow::snow_step_inplace(snow_, snow_params_, dt);
  last_compose_ = now;

  CapturedFrame camera;
  std::array<std::optional<track::FaceTrack>, track::kSlotCount> slots;
  {
    std::lock_guard lock(mu_);
    camera = camera_;
    slots = tracker_.slots();
  }

  compose::SpriteList sprites;
  if (camera.frame) {
    const Rect bounds{0, 0, camera.frame->width(), camera.frame->height()};
    for (int s = 0; s < track::kSlotCount; ++s) {
      if (!slots[s]) continue;
      const Rect face = intersect(slots[s]->pixel_rect(), bounds);
      if (face.empty()) continue;
      sprites.emplace_back(s, std::make_shared<const Rgba8Frame>(compose::extract_face_sprite(
                                  *camera.frame, face, config_.sprite.padding, config_.sprite.feather)));
    }
  }
  const Size out_size = config_.pipeline.output;
  auto snow_layer = std::make_shared<const Rgba8Frame>(snow::snow_raster(snow_, out_size));
  const compose::Scene scene =
      compose::build_scene(background_at(now), sprites, geometry_, std::move(snow_layer), out_size);
  auto frame = std::make_shared<const Rgba8Frame>(compose::composite(scene, config_.pipeline.compose_workers));

  std::uint64_t index;
  {
    std::lock_guard lock(mu_);
    index = counters_.frames_composed;
  }
  sink_->write(*frame, index);
  std::lock_guard lock(mu_);
  output_ = std::move(frame);
  ++counters_.frames_composed;
}

TickResult Pipeline::tick(double now) {
  TickResult t;
  const ReadResult r = capture(now);
  t.captured = r.frame.has_value();
  t.dropped = r.dropped;
  if (r.end_of_stream) {
    t.end_of_stream = true;
    return t;
  }
  const double period = 1.0 / config_.pipeline.detect_cadence;
  if (now + 1e-9 >= next_detect_) {
    CapturedFrame latest;
    {
      std::lock_guard lock(mu_);
      latest = camera_;
    }
    if (latest.frame && (!last_detected_ts_ || latest.timestamp > *last_detected_ts_)) {
      apply_detections(detect(latest));
      last_detected_ts_ = latest.timestamp;
      t.detected = true;
    }
    while (next_detect_ <= now + 1e-9) next_detect_ += period;
  }
  compose(now);
  t.composed = true;
  return t;
}

track::TrackerState Pipeline::tracker_state() const {
  std::lock_guard lock(mu_);
  return tracker_.state();
}

void Pipeline::restore_tracker(track::TrackerState state) {
  std::lock_guard lock(mu_);
  tracker_.restore(std::move(state));
}

std::array<std::optional<track::FaceTrack>, track::kSlotCount> Pipeline::slots() const {
  std::lock_guard lock(mu_);
  return tracker_.slots();
}

std::shared_ptr<const Rgba8Frame> Pipeline::latest_frame() const {
  std::lock_guard lock(mu_);
  return output_;
}

std::shared_ptr<const Rgba8Frame> Pipeline::latest_camera() const {
  std::lock_guard lock(mu_);
  return camera_.frame;
}

std::optional<double> Pipeline::latest_camera_timestamp() const {
  std::lock_guard lock(mu_);
  if (!camera_.frame) return std::nullopt;
  return camera_.timestamp;
}

PipelineCounters Pipeline::counters() const {
  std::lock_guard lock(mu_);
  return counters_;
}

}  // namespace snowframe::runtime
