#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <memory>
#include <thread>

#include "snowframe/detect/cascade.hpp"
#include "snowframe/runtime/engine.hpp"
#include "snowframe/version.hpp"
#include "support/test_support.hpp"

namespace snowframe::testing {

inline std::shared_ptr<const detect::CascadeModel> shared_cascade() {
  static auto m = std::make_shared<const detect::CascadeModel>(detect::load_cascade(stock_cascade()));
  return m;
}

inline const std::vector<Rgba8Frame>& face_patches() {
  static const auto faces = runtime::load_face_patches(data("faces"));
  return faces;
}

/// Small frames so that engine tests run quickly.
inline runtime::EngineConfig small_engine_config(runtime::ClockMode clock = runtime::ClockMode::Simulated) {
  runtime::EngineConfig c = runtime::default_config();
  c.pipeline.capture = {640, 360};
  c.pipeline.output = {160, 100};
  c.pipeline.detect_downscale = 0.5;
  c.pipeline.clock = clock;
  c.snow.max_flakes = 50;
  c.cascade = stock_cascade();
  return c;
}

inline runtime::Pipeline::Components synthetic_components(const runtime::EngineConfig& c, int faces = 2,
                                                          std::unique_ptr<runtime::FrameSink> sink = nullptr) {
  runtime::Pipeline::Components comp;
  comp.source = std::make_unique<runtime::SyntheticSource>(c.pipeline.capture, c.pipeline.capture_fps, c.seed,
                                                           face_patches(), faces);
  comp.sink = sink ? std::move(sink) : std::make_unique<runtime::NullSink>();
  comp.cascade = shared_cascade();
  return comp;
}

/// Runs engine.run() on a background thread for the lifetime of the object.
class EngineThread {
 public:
  explicit EngineThread(runtime::Engine& e) : engine_(e), result_(std::async(std::launch::async, [&e] { return e.run(); })) {}
  ~EngineThread() {
    if (result_.valid()) {
      engine_.request_stop();
      result_.wait();
    }
  }
  /// Stops the engine and returns its exit code.
  int stop(std::chrono::seconds timeout = std::chrono::seconds(30)) {
    engine_.request_stop();
    return join(timeout);
  }
  int join(std::chrono::seconds timeout = std::chrono::seconds(30)) {
    if (result_.wait_for(timeout) != std::future_status::ready) throw std::runtime_error("engine did not stop");
    return result_.get();
  }

 private:
  runtime::Engine& engine_;
  std::future<int> result_;
};

inline bool wait_until(const std::function<bool()>& pred,
                       std::chrono::milliseconds timeout = std::chrono::seconds(20)) {
  const auto end = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < end) {
    if (pred()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  return pred();
}

}  // namespace snowframe::testing
