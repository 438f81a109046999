#include "snowframe/runtime/engine.hpp"

#include "snowframe/compose/background.hpp"
#include "snowframe/detect/cascade.hpp"
#include "snowframe/errors.hpp"
#include "snowframe/runtime/camera.hpp"
#include "snowframe/version.hpp"

namespace snowframe::runtime {

namespace {

using Clock = std::chrono::steady_clock;

bool is_cleanup_event(const LifecycleEvent& e) {
  return e.kind == EventKind::ShutdownRequested || e.kind == EventKind::FaultRaised;
}

// Sleeps until `deadline` (engine seconds) in short slices while `run` holds.
template <typename NowFn>
void sleep_until(double deadline, const std::atomic<bool>& run, NowFn now) {
  for (;;) {
    const double left = deadline - now();
    if (left <= 0.0 || !run.load()) return;
    std::this_thread::sleep_for(std::chrono::duration<double>(std::min(left, 0.005)));
  }
}

}  // namespace

Engine::Engine(EngineConfig config, Pipeline::Components components, EngineOptions options)
    : config_(std::move(config)),
      options_(std::move(options)),
      config_hash_(runtime::config_hash(config_)),
      pipeline_(config_, std::move(components)),
      realtime_(config_.pipeline.clock == ClockMode::Realtime),
      t0_(Clock::now()),
      thermal_(ThermalModel::at_ambient(config_.thermal, config_.fan)) {
  validate(config_);
  telemetry_.temp_c = thermal_.temp;
  telemetry_.fan = thermal_.fan;
}

Engine::~Engine() { stop_workers(); }

double Engine::now() const {
  if (realtime_) return std::chrono::duration<double>(Clock::now() - t0_).count();
  return sim_now_;
}

EngineState Engine::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

Telemetry Engine::telemetry() const {
  std::lock_guard lock(mu_);
  return telemetry_;
}

std::optional<track::TrackerState> Engine::persisted_tracker() const {
  std::lock_guard lock(mu_);
  return persisted_;
}

std::optional<std::string> Engine::first_fault() const {
  std::lock_guard lock(mu_);
  return first_fault_;
}

std::future<TransitionOutcome> Engine::post(LifecycleEvent event) {
  Pending p{std::move(event), {}};
  auto fut = p.promise.get_future();
  {
    std::lock_guard lock(mu_);
    if (finished_.load()) {
      p.promise.set_value(TransitionOutcome{state_, state_, {}, true});
      return fut;
    }
    queue_.push_back(std::move(p));
  }
  cv_.notify_all();
  return fut;
}

void Engine::post_internal(LifecycleEvent e) { (void)post(std::move(e)); }

TransitionOutcome Engine::request(LifecycleEvent event, std::chrono::milliseconds timeout) {
  auto fut = post(std::move(event));
  if (fut.wait_for(timeout) != std::future_status::ready) {
    throw Error("engine did not apply the event within the timeout");
  }
  return fut.get();
}

void Engine::execute(Action a) {
  switch (a) {
    case Action::StartSource:
    case Action::ReacquireSource:
      pipeline_.open_source(now());
      break;
    case Action::StartPipeline:
      pipeline_.open_sink();
      pipeline_.start(now());
      rate_origin_ = now();
      next_frame_deadline_ = now();
      start_workers();
      break;
    case Action::PausePipeline:
      stop_workers();
      break;
    case Action::FlushSinks:
      pipeline_.flush_sink();
      break;
    case Action::ReleaseSource:
      pipeline_.close_source();
      break;
    case Action::PersistTracker: {
      auto snap = pipeline_.tracker_state();
      std::lock_guard lock(mu_);
      persisted_ = std::move(snap);
      break;
    }
    case Action::RestoreTracker: {
      std::optional<track::TrackerState> snap;
      {
        std::lock_guard lock(mu_);
        snap = persisted_;
      }
      if (snap) pipeline_.restore_tracker(*snap);
      break;
    }
    case Action::ResumePipeline:
      pipeline_.resume(now());
      next_frame_deadline_ = now();
      start_workers();
      break;
    case Action::CloseSinks:
      pipeline_.close_sink();
      break;
    case Action::CleanupBestEffort:
      stop_workers();
      try {
        pipeline_.flush_sink();
      } catch (...) {
      }
      try {
        pipeline_.close_source();
      } catch (...) {
      }
      break;
  }
}

void Engine::apply(Pending& p) {
  const EngineState before = state();
  const Transition tr = transition(before, p.event);
  if (tr.noop) {
    p.promise.set_value(TransitionOutcome{before, before, {}, true});
    return;
  }
  std::vector<Action> done;
  std::optional<std::string> failure;
  for (Action a : tr.actions) {
    if (options_.on_action) options_.on_action(a, before);
    try {
      execute(a);
    } catch (const std::exception& e) {
      if (!is_cleanup_event(p.event)) {
        failure = std::string(to_string(a)) + " failed: " + e.what();
        break;
      }
    }
    done.push_back(a);
  }
  EngineState after = tr.next;
  if (failure) {
    if (options_.on_action) options_.on_action(Action::CleanupBestEffort, before);
    execute(Action::CleanupBestEffort);
    done.push_back(Action::CleanupBestEffort);
    after = EngineState::faulted(*failure);
  }
  if (after.kind == StateKind::Faulted) faulted_ever_ = true;
  {
    std::lock_guard lock(mu_);
    if (after.kind == StateKind::Faulted && !first_fault_) first_fault_ = after.fault_reason;
    state_ = after;
    telemetry_.state = after;
  }
  p.promise.set_value(TransitionOutcome{before, after, std::move(done), false});
}

bool Engine::drain_events() {
  bool any = false;
  for (;;) {
    Pending p;
    {
      std::lock_guard lock(mu_);
      if (queue_.empty()) break;
      p = std::move(queue_.front());
      queue_.pop_front();
    }
    apply(p);
    any = true;
  }
  return any;
}

int Engine::run() {
  {
    std::lock_guard lock(mu_);
    queue_.push_front(Pending{LifecycleEvent{EventKind::InitComplete, {}}, {}});
  }
  for (;;) {
    drain_events();
    if (state().kind == StateKind::ShuttingDown) break;
    if (stop_requested_.exchange(false) || pipeline_.sink().close_requested()) {
      post_internal({EventKind::ShutdownRequested, {}});
      continue;
    }
    const StateKind kind = state().kind;
    if (kind == StateKind::Faulted && options_.exit_on_fault) {
      post_internal({EventKind::ShutdownRequested, {}});
      drain_events();
      break;
    }
    if (kind == StateKind::Running) {
      running_step();
    } else {
      idle_wait();
    }
    advance_thermal();
    publish_telemetry();
  }
  stop_workers();
  advance_thermal();
  publish_telemetry();
  {
    std::lock_guard lock(mu_);
    finished_.store(true);
    for (auto& p : queue_) p.promise.set_value(TransitionOutcome{state_, state_, {}, true});
    queue_.clear();
  }
  return faulted_ever_ ? 1 : 0;
}

void Engine::running_step() {
  const double fps = config_.pipeline.output_fps;
  try {
    if (!realtime_) {
      const double t = sim_now_;
      const TickResult r = pipeline_.tick(t);
      if (r.end_of_stream) {
        post_internal({EventKind::ShutdownRequested, {}});
        return;
      }
      if (r.detected) detect_rate_.record(t);
      out_rate_.record(t);
      ++sim_ticks_;
      sim_now_ = static_cast<double>(sim_ticks_) / fps;
    } else {
      const double t = now();
      while (auto d = detections_.try_take()) {
        pipeline_.apply_detections(*d);
        detect_rate_.record(t);
      }
      pipeline_.compose(t);
      out_rate_.record(t);
    }
  } catch (const std::exception& e) {
    post_internal(LifecycleEvent::fault(e.what()));
    return;
  }
  {
    std::lock_guard lock(mu_);
    last_frame_at_ = std::chrono::system_clock::now();
  }
  if (options_.frame_limit && pipeline_.counters().frames_composed >= *options_.frame_limit) {
    post_internal({EventKind::ShutdownRequested, {}});
    return;
  }
  if (realtime_) {
    next_frame_deadline_ += 1.0 / fps;
    if (next_frame_deadline_ < now()) next_frame_deadline_ = now();
    std::unique_lock lock(mu_);
    const auto wait = std::chrono::duration<double>(std::max(0.0, next_frame_deadline_ - now()));
    cv_.wait_for(lock, wait, [&] { return !queue_.empty() || stop_requested_.load(); });
  }
}

void Engine::idle_wait() {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, std::chrono::milliseconds(50),
               [&] { return !queue_.empty() || stop_requested_.load(); });
}

void Engine::advance_thermal() {
  const double t = now();
  const double dt = t - last_thermal_;
  if (dt <= 0.0) return;
  const double load = state().kind == StateKind::Running ? 1.0 : 0.0;
  thermal_ = thermal_step(thermal_, load, dt);
  last_thermal_ = t;
}

void Engine::publish_telemetry() {
  const double t = now();
  const PipelineCounters c = pipeline_.counters();
  const auto slots = pipeline_.slots();
  const auto cam = pipeline_.latest_camera();
  std::lock_guard lock(mu_);
  Telemetry& tm = telemetry_;
  tm.state = state_;
  tm.fps_out = out_rate_.rate(t, rate_origin_);
  tm.detect_hz = detect_rate_.rate(t, rate_origin_);
  tm.temp_c = thermal_.temp;
  tm.fan = thermal_.fan;
  tm.face_count = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      tm.slots[i] = SlotReport{slots[i]->id, slots[i]->pixel_rect()};
      ++tm.face_count;
    } else {
      tm.slots[i].reset();
    }
  }
  tm.uptime_s = t;
  tm.frames_composed = c.frames_composed;
  tm.frames_captured = c.frames_captured;
  tm.frames_dropped = c.frames_dropped;
  tm.detections_run = c.detections_run;
  tm.last_frame_at = last_frame_at_;
  tm.camera = cam ? cam->size() : Size{0, 0};
}

void Engine::start_workers() {
  if (!realtime_ || workers_run_.load()) return;
  to_detect_.reopen();
  detections_.reopen();
  workers_run_.store(true);
  capture_thread_ = std::thread([this] { capture_loop(); });
  detect_thread_ = std::thread([this] { detect_loop(); });
}

void Engine::stop_workers() {
  workers_run_.store(false);
  to_detect_.close();
  detections_.close();
  if (capture_thread_.joinable()) capture_thread_.join();
  if (detect_thread_.joinable()) detect_thread_.join();
}

void Engine::capture_loop() {
  const double period = 1.0 / config_.pipeline.capture_fps;
  const bool paced = !pipeline_.source().self_paced();
  double next = now();
  auto clock = [this] { return now(); };
  while (workers_run_.load()) {
    try {
      ReadResult r = pipeline_.capture(now());
      if (r.end_of_stream) {
        post_internal({EventKind::ShutdownRequested, {}});
        return;
      }
      if (r.frame) to_detect_.put(std::move(*r.frame));
    } catch (const std::exception& e) {
      post_internal(LifecycleEvent::fault(std::string("capture: ") + e.what()));
      return;
    }
    if (paced) {
      next += period;
      if (next < now()) next = now();
      sleep_until(next, workers_run_, clock);
    }
  }
}

void Engine::detect_loop() {
  const double period = 1.0 / config_.pipeline.detect_cadence;
  double next = now();
  auto clock = [this] { return now(); };
  while (workers_run_.load()) {
    sleep_until(next, workers_run_, clock);
    auto frame = to_detect_.take_for(std::chrono::milliseconds(100));
    if (!frame) continue;
    try {
      detections_.put(pipeline_.detect(*frame));
    } catch (const std::exception& e) {
      post_internal(LifecycleEvent::fault(std::string("detect: ") + e.what()));
      return;
    }
    next += period;
    if (next < now()) next = now();
  }
}

Pipeline::Components make_components(const EngineConfig& config) {
  Pipeline::Components c;

  std::filesystem::path cascade = config.cascade;
  std::error_code ec;
  if (!std::filesystem::exists(cascade, ec) && cascade.is_relative()) {
    const auto bundled = find_data_file(std::filesystem::path("cascades") / cascade);
    if (std::filesystem::exists(bundled, ec)) cascade = bundled;
  }
  if (!std::filesystem::exists(cascade, ec)) throw IoError("cascade file not found: " + config.cascade.string());
  c.cascade = std::make_shared<const detect::CascadeModel>(detect::load_cascade(cascade));

  const std::string& src = config.source.spec;
  const auto& p = config.pipeline;
  if (src == "synthetic") {
    c.source = std::make_unique<SyntheticSource>(p.capture, p.capture_fps, config.seed,
                                                 load_face_patches(find_data_file("faces")),
                                                 config.source.synthetic_faces);
  } else if (src == "null") {
    c.source = std::make_unique<NullSource>();
  } else if (src.rfind("dir:", 0) == 0) {
    c.source = std::make_unique<DirSource>(src.substr(4), p.capture_fps, config.source.loop);
  } else if (src == "camera" || src.rfind("camera:", 0) == 0) {
    const std::string dev = src == "camera" ? "/dev/video0" : src.substr(7);
    c.source = make_camera_source(dev, p.capture, p.capture_fps);
  } else {
    throw ConfigError("unknown source '" + src + "'");
  }

  const std::string& sink = config.sink.spec;
  if (sink == "null") {
    c.sink = std::make_unique<NullSink>();
  } else if (sink.rfind("dir:", 0) == 0) {
    c.sink = std::make_unique<DirSink>(sink.substr(4));
  } else if (sink == "window") {
    c.sink = make_window_sink(p.output.width, p.output.height, config.fullscreen(), "snowframe");
  } else {
    throw ConfigError("unknown sink '" + sink + "'");
  }

  if (!config.background.dir.empty()) c.background = compose::load_background(config.background.dir, p.output);
  return c;
}

}  // namespace snowframe::runtime
