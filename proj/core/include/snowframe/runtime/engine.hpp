#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "snowframe/runtime/config.hpp"
#include "snowframe/runtime/lifecycle.hpp"
#include "snowframe/runtime/mailbox.hpp"
#include "snowframe/runtime/pipeline.hpp"
#include "snowframe/runtime/rate.hpp"
#include "snowframe/runtime/telemetry.hpp"
#include "snowframe/runtime/thermal.hpp"

namespace snowframe::runtime {

struct TransitionOutcome {
  EngineState before;
  EngineState after;
  std::vector<Action> actions;
  bool noop = false;
};

struct EngineOptions {
  /// Leave run() as soon as the engine faults. When false a faulted engine
  /// keeps serving health until it is shut down.
  bool exit_on_fault = true;
  /// Shut down after this many composed frames.
  std::optional<std::uint64_t> frame_limit;
  /// Called for every executed action with the state at that moment.
  std::function<void(Action, const EngineState&)> on_action;
};

/// Owns the pipeline and the lifecycle. run() drives everything from the
/// calling thread; other threads interact only through post()/request(),
/// telemetry() and the frame snapshots.
class Engine {
 public:
  Engine(EngineConfig config, Pipeline::Components components, EngineOptions options = {});
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Runs until ShuttingDown (or a fault when exit_on_fault). Returns 0 after
  /// a clean shutdown and 1 if the engine faulted.
  int run();

  /// Queues an event. The future resolves once it has been applied.
  std::future<TransitionOutcome> post(LifecycleEvent event);
  /// post() and wait. Throws Error on timeout.
  TransitionOutcome request(LifecycleEvent event,
                            std::chrono::milliseconds timeout = std::chrono::seconds(10));

  /// Async-signal-safe shutdown request.
  void request_stop() noexcept { stop_requested_.store(true); }

  EngineState state() const;
  Telemetry telemetry() const;
  std::shared_ptr<const Rgba8Frame> latest_frame() const { return pipeline_.latest_frame(); }
  std::shared_ptr<const Rgba8Frame> latest_camera() const { return pipeline_.latest_camera(); }
  const EngineConfig& config() const noexcept { return config_; }
  const std::string& config_hash() const noexcept { return config_hash_; }
  std::optional<track::TrackerState> persisted_tracker() const;
  const Pipeline& pipeline() const noexcept { return pipeline_; }
  bool finished() const noexcept { return finished_.load(); }
  /// Reason of the first fault, kept after the engine has shut down.
  std::optional<std::string> first_fault() const;

 private:
  struct Pending {
    LifecycleEvent event;
    std::promise<TransitionOutcome> promise;
  };

  double now() const;
  void apply(Pending& p);
  void execute(Action a);
  bool drain_events();
  void running_step();
  void idle_wait();
  void advance_thermal();
  void publish_telemetry();
  void start_workers();
  void stop_workers();
  void capture_loop();
  void detect_loop();
  void post_internal(LifecycleEvent e);

  EngineConfig config_;
  EngineOptions options_;
  std::string config_hash_;
  Pipeline pipeline_;
  bool realtime_;
  std::chrono::steady_clock::time_point t0_;

  // Loop-thread state.
  double sim_now_ = 0.0;
  std::uint64_t sim_ticks_ = 0;
  double last_thermal_ = 0.0;
  double next_frame_deadline_ = 0.0;
  ThermalModel thermal_;
  RateMeter out_rate_;
  RateMeter detect_rate_;
  double rate_origin_ = 0.0;
  bool faulted_ever_ = false;

  mutable std::mutex mu_;  // guards state_, queue_, telemetry_, persisted_
  std::condition_variable cv_;
  EngineState state_;
  std::deque<Pending> queue_;
  Telemetry telemetry_;
  std::optional<track::TrackerState> persisted_;
  std::optional<std::string> first_fault_;
  std::atomic<bool> finished_{false};
  std::atomic<bool> stop_requested_{false};
  std::optional<std::chrono::system_clock::time_point> last_frame_at_;

  // Realtime workers.
  std::atomic<bool> workers_run_{false};
  std::thread capture_thread_;
  std::thread detect_thread_;
  LatestMailbox<CapturedFrame> to_detect_;
  LatestMailbox<DetectionResult> detections_;
};

/// Builds source, sink, cascade and background from the config. Throws
/// IoError / ConfigError with the offending path.
Pipeline::Components make_components(const EngineConfig& config);

}  // namespace snowframe::runtime
