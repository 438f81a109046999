#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "snowframe/compose/compose.hpp"
#include "snowframe/detect/detector.hpp"
#include "snowframe/geometry.hpp"
#include "snowframe/runtime/thermal.hpp"
#include "snowframe/snow/snowfall.hpp"
#include "snowframe/track/tracker.hpp"

namespace snowframe::runtime {

enum class Mode { Exhibition, Home };
enum class ClockMode { Realtime, Simulated };

struct PipelineConfig {
  Size capture{1920, 1080};
  double capture_fps = 30.0;
  Size output{1280, 800};
  double output_fps = 60.0;
  double detect_downscale = 0.25;
  double detect_cadence = 10.0;  // Hz
  std::optional<bool> mirror;    // unset: on in home mode, off in exhibition
  ClockMode clock = ClockMode::Realtime;
  int compose_workers = 1;
};

struct SpriteConfig {
  double padding = 0.25;
  double feather = 0.2;
};

struct BackgroundConfig {
  std::filesystem::path dir;  // empty: procedural background
  double fps = 30.0;
};

struct SourceConfig {
  std::string spec = "synthetic";  // synthetic | dir:PATH | camera[:DEVICE] | null
  bool loop = true;                // dir sources only
  int synthetic_faces = 2;
};

struct SinkConfig {
  std::string spec = "null";  // window | dir:PATH | null
  std::optional<bool> fullscreen;
};

struct ControlConfig {
  std::optional<bool> enabled;  // unset: on in exhibition mode, off in home
  int port = 8787;
  std::string bind = "127.0.0.1";
  std::filesystem::path console_dir;  // served under /console/ when set
};

struct EngineConfig {
  Mode mode = Mode::Exhibition;
  std::filesystem::path cascade = "haarcascade_frontalface_default.xml";
  std::uint64_t seed = 1;
  PipelineConfig pipeline;
  detect::DetectParams detector;
  track::TrackerParams tracker;
  SpriteConfig sprite;
  std::optional<compose::SlotGeometry> slots;  // unset: default layout
  snow::SnowParams snow;
  ThermalParams thermal;
  bool fan = true;
  BackgroundConfig background;
  SourceConfig source;
  SinkConfig sink;
  ControlConfig control;

  bool mirror() const { return pipeline.mirror.value_or(mode == Mode::Home); }
  bool control_enabled() const { return control.enabled.value_or(mode == Mode::Exhibition); }
  bool fullscreen() const { return sink.fullscreen.value_or(mode == Mode::Exhibition); }
  compose::SlotGeometry slot_geometry() const {
    return slots.value_or(compose::default_slot_geometry(pipeline.output));
  }
  /// Snow parameters with bounds and seed filled from the engine settings.
  snow::SnowParams snow_params() const;
};

/// Defaults used by the runtime detector: faces no smaller than the model
/// window and a coarser pyramid than the offline detector.
detect::DetectParams default_runtime_detect_params();

EngineConfig default_config();

/// Parses a JSON document. Unknown keys are errors. Relative paths resolve
/// against `base_dir`. Throws ConfigError.
EngineConfig parse_config(const std::string& json_text,
                          const std::filesystem::path& base_dir = {});

EngineConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError when fields are out of range or inconsistent.
void validate(const EngineConfig& config);

/// Fully resolved configuration as pretty JSON.
std::string config_to_json(const EngineConfig& config, int indent = 2);

/// FNV-1a 64 of the compact resolved JSON, as 16 hex digits.
std::string config_hash(const EngineConfig& config);

std::string_view to_string(Mode mode);
std::string_view to_string(ClockMode mode);
Mode parse_mode(std::string_view text);
ClockMode parse_clock(std::string_view text);

}  // namespace snowframe::runtime
