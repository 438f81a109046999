#include "snowframe/runtime/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snowframe/errors.hpp"

namespace snowframe::runtime {

using nlohmann::json;

namespace {

// Reads fields from one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + path(key) + "'");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (const json* v = find(key)) out = convert<T>(*v, key);
  }

  template <typename T>
  void get(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) {
      out.reset();
      return;
    }
    out = convert<T>(*it, key);
  }

  void get_size(const std::string& wkey, const std::string& hkey, Size& out) {
    get(wkey, out.width);
    get(hkey, out.height);
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  template <typename T>
  T convert(const json& v, const std::string& key) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError("key '" + path(key) + "' has the wrong type");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

std::string resolve_spec(const std::filesystem::path& base, const std::string& spec) {
  if (spec.rfind("dir:", 0) == 0) return "dir:" + resolve(base, spec.substr(4)).string();
  return spec;
}

Rect parse_rect(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) throw ConfigError(where + " must be [x, y, w, h]");
  Rect r;
  int* fields[4] = {&r.x, &r.y, &r.w, &r.h};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v[i].is_number_integer()) throw ConfigError(where + " must hold integers");
    *fields[i] = v[i].get<int>();
  }
  return r;
}

void read_pipeline(const json& j, PipelineConfig& p) {
  ObjectReader r(j, "pipeline");
  r.get_size("capture_width", "capture_height", p.capture);
  r.get("capture_fps", p.capture_fps);
  r.get_size("output_width", "output_height", p.output);
  r.get("output_fps", p.output_fps);
  r.get("detect_downscale", p.detect_downscale);
  r.get("detect_cadence_hz", p.detect_cadence);
  r.get("mirror", p.mirror);
  std::optional<std::string> clock;
  r.get("clock", clock);
  if (clock) p.clock = parse_clock(*clock);
  r.get("compose_workers", p.compose_workers);
}

void read_detector(const json& j, detect::DetectParams& d) {
  ObjectReader r(j, "detector");
  r.get("scale_factor", d.scale_factor);
  r.get("step_shift", d.step_shift);
  int min_size = d.min_size.width, max_size = d.max_size.width;
  r.get("min_size", min_size);
  r.get("max_size", max_size);
  d.min_size = {min_size, min_size};
  d.max_size = {max_size, max_size};
  r.get("min_neighbors", d.min_neighbors);
  r.get("max_faces", d.max_faces);
  r.get("group_eps", d.group_eps);
}

void read_tracker(const json& j, track::TrackerParams& t) {
  ObjectReader r(j, "tracker");
  r.get("iou_match_threshold", t.iou_match_threshold);
  r.get("min_hits", t.min_hits);
  r.get("max_misses", t.max_misses);
  r.get("smoothing", t.smoothing);
}

void read_snow(const json& j, snow::SnowParams& s) {
  ObjectReader r(j, "snow");
  r.get("spawn_rate", s.spawn_rate);
  r.get("gravity", s.gravity);
  r.get("wind", s.wind);
  r.get("max_flakes", s.max_flakes);
  if (const json* ranges = r.find("ranges")) {
    ObjectReader rr(*ranges, "snow.ranges");
    auto pair = [&](const char* key, double& lo, double& hi) {
      if (const json* v = rr.find(key)) {
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
          throw ConfigError(std::string("snow.ranges.") + key + " must be [min, max]");
        }
        lo = (*v)[0].get<double>();
        hi = (*v)[1].get<double>();
      }
    };
    pair("radius", s.ranges.radius_min, s.ranges.radius_max);
    pair("vx", s.ranges.vx_min, s.ranges.vx_max);
    pair("vy", s.ranges.vy_min, s.ranges.vy_max);
    pair("sway_amp", s.ranges.sway_amp_min, s.ranges.sway_amp_max);
    pair("sway_freq", s.ranges.sway_freq_min, s.ranges.sway_freq_max);
    pair("alpha", s.ranges.alpha_min, s.ranges.alpha_max);
  }
}

json rect_json(const Rect& r) { return json::array({r.x, r.y, r.w, r.h}); }

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json to_json(const EngineConfig& c) {
  const auto& p = c.pipeline;
  json slots = nullptr;
  if (c.slots) {
    slots = json::array();
    for (const Rect& r : c.slots->regions) slots.push_back(rect_json(r));
  }
  const auto& sr = c.snow.ranges;
  return json{
      {"mode", to_string(c.mode)},
      {"cascade", c.cascade.string()},
      {"seed", c.seed},
      {"pipeline",
       {{"capture_width", p.capture.width},
        {"capture_height", p.capture.height},
        {"capture_fps", p.capture_fps},
        {"output_width", p.output.width},
        {"output_height", p.output.height},
        {"output_fps", p.output_fps},
        {"detect_downscale", p.detect_downscale},
        {"detect_cadence_hz", p.detect_cadence},
        {"mirror", opt(p.mirror)},
        {"clock", to_string(p.clock)},
        {"compose_workers", p.compose_workers}}},
      {"detector",
       {{"scale_factor", c.detector.scale_factor},
        {"step_shift", c.detector.step_shift},
        {"min_size", c.detector.min_size.width},
        {"max_size", c.detector.max_size.width},
        {"min_neighbors", c.detector.min_neighbors},
        {"max_faces", c.detector.max_faces},
        {"group_eps", c.detector.group_eps}}},
      {"tracker",
       {{"iou_match_threshold", c.tracker.iou_match_threshold},
        {"min_hits", c.tracker.min_hits},
        {"max_misses", c.tracker.max_misses},
        {"smoothing", c.tracker.smoothing}}},
      {"sprite", {{"padding", c.sprite.padding}, {"feather", c.sprite.feather}}},
      {"slots", slots},
      {"snow",
       {{"spawn_rate", c.snow.spawn_rate},
        {"gravity", c.snow.gravity},
        {"wind", c.snow.wind},
        {"max_flakes", c.snow.max_flakes},
        {"ranges",
         {{"radius", {sr.radius_min, sr.radius_max}},
          {"vx", {sr.vx_min, sr.vx_max}},
          {"vy", {sr.vy_min, sr.vy_max}},
          {"sway_amp", {sr.sway_amp_min, sr.sway_amp_max}},
          {"sway_freq", {sr.sway_freq_min, sr.sway_freq_max}},
          {"alpha", {sr.alpha_min, sr.alpha_max}}}}}},
      {"thermal",
       {{"ambient", c.thermal.ambient},
        {"heat_rate", c.thermal.heat_rate},
        {"cool_fan", c.thermal.cool_fan},
        {"cool_nofan", c.thermal.cool_nofan},
        {"fan", c.fan}}},
      {"background", {{"dir", c.background.dir.string()}, {"fps", c.background.fps}}},
      {"source",
       {{"spec", c.source.spec}, {"loop", c.source.loop}, {"synthetic_faces", c.source.synthetic_faces}}},
      {"sink", {{"spec", c.sink.spec}, {"fullscreen", opt(c.sink.fullscreen)}}},
      {"control",
       {{"enabled", opt(c.control.enabled)},
        {"port", c.control.port},
        {"bind", c.control.bind},
        {"console_dir", c.control.console_dir.string()}}},
  };
}

}  // namespace

detect::DetectParams default_runtime_detect_params() {
  detect::DetectParams d;
  d.scale_factor = 1.2;
  d.min_size = {24, 24};
  d.min_neighbors = 3;
  d.max_faces = 4;
  return d;
}

EngineConfig default_config() {
  EngineConfig c;
  c.detector = default_runtime_detect_params();
  return c;
}

snow::SnowParams EngineConfig::snow_params() const {
  snow::SnowParams s = snow;
  s.bounds = pipeline.output;
  s.seed = seed;
  return s;
}

std::string_view to_string(Mode mode) { return mode == Mode::Home ? "home" : "exhibition"; }
std::string_view to_string(ClockMode mode) { return mode == ClockMode::Simulated ? "simulated" : "realtime"; }

Mode parse_mode(std::string_view text) {
  if (text == "exhibition") return Mode::Exhibition;
  if (text == "home") return Mode::Home;
  throw ConfigError("mode must be 'exhibition' or 'home', got '" + std::string(text) + "'");
}

ClockMode parse_clock(std::string_view text) {
  if (text == "realtime") return ClockMode::Realtime;
  if (text == "simulated") return ClockMode::Simulated;
  throw ConfigError("clock must be 'realtime' or 'simulated', got '" + std::string(text) + "'");
}

EngineConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  EngineConfig c = default_config();
  {
    ObjectReader r(root, "");
    std::optional<std::string> mode;
    r.get("mode", mode);
    if (mode) c.mode = parse_mode(*mode);
    std::optional<std::string> cascade;
    r.get("cascade", cascade);
    if (cascade) c.cascade = resolve(base_dir, *cascade);
    r.get("seed", c.seed);
    if (const json* v = r.find("pipeline")) read_pipeline(*v, c.pipeline);
    if (const json* v = r.find("detector")) read_detector(*v, c.detector);
    if (const json* v = r.find("tracker")) read_tracker(*v, c.tracker);
    if (const json* v = r.find("sprite")) {
      ObjectReader s(*v, "sprite");
      s.get("padding", c.sprite.padding);
      s.get("feather", c.sprite.feather);
    }
    if (const json* v = r.find("slots")) {
      if (!v->is_array() || v->size() != compose::kFigureCount) {
        throw ConfigError("slots must be a list of exactly 4 rectangles");
      }
      compose::SlotGeometry g;
      for (std::size_t i = 0; i < g.regions.size(); ++i) {
        g.regions[i] = parse_rect((*v)[i], "slots[" + std::to_string(i) + "]");
      }
      c.slots = g;
    }
    if (const json* v = r.find("snow")) read_snow(*v, c.snow);
    if (const json* v = r.find("thermal")) {
      ObjectReader t(*v, "thermal");
      t.get("ambient", c.thermal.ambient);
      t.get("heat_rate", c.thermal.heat_rate);
      t.get("cool_fan", c.thermal.cool_fan);
      t.get("cool_nofan", c.thermal.cool_nofan);
      t.get("fan", c.fan);
    }
    if (const json* v = r.find("background")) {
      ObjectReader b(*v, "background");
      std::string dir;
      b.get("dir", dir);
      c.background.dir = resolve(base_dir, dir);
      b.get("fps", c.background.fps);
    }
    if (const json* v = r.find("source")) {
      ObjectReader s(*v, "source");
      s.get("spec", c.source.spec);
      c.source.spec = resolve_spec(base_dir, c.source.spec);
      s.get("loop", c.source.loop);
      s.get("synthetic_faces", c.source.synthetic_faces);
    }
    if (const json* v = r.find("sink")) {
      ObjectReader s(*v, "sink");
      s.get("spec", c.sink.spec);
      c.sink.spec = resolve_spec(base_dir, c.sink.spec);
      s.get("fullscreen", c.sink.fullscreen);
    }
    if (const json* v = r.find("control")) {
      ObjectReader s(*v, "control");
      s.get("enabled", c.control.enabled);
      s.get("port", c.control.port);
      s.get("bind", c.control.bind);
      std::string console;
      s.get("console_dir", console);
      c.control.console_dir = resolve(base_dir, console);
    }
  }
  validate(c);
  return c;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void validate(const EngineConfig& c) {
  const auto& p = c.pipeline;
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (p.capture.width < 1 || p.capture.height < 1) fail("pipeline capture size must be positive");
  if (p.output.width < 1 || p.output.height < 1) fail("pipeline output size must be positive");
  if (!(p.capture_fps > 0.0 && p.capture_fps <= 1000.0)) fail("pipeline capture_fps must be in (0, 1000]");
  if (!(p.output_fps > 0.0 && p.output_fps <= 1000.0)) fail("pipeline output_fps must be in (0, 1000]");
  if (!(p.detect_downscale > 0.0 && p.detect_downscale <= 1.0)) {
    fail("pipeline detect_downscale must be in (0, 1]");
  }
  if (!(p.detect_cadence > 0.0)) fail("pipeline detect_cadence_hz must be > 0");
  if (p.detect_cadence > p.capture_fps) fail("pipeline detect_cadence_hz must not exceed capture_fps");
  if (p.compose_workers < 1 || p.compose_workers > 64) fail("pipeline compose_workers must be in [1, 64]");
  if (!(c.sprite.padding >= 0.0 && c.sprite.padding <= 2.0)) fail("sprite padding must be in [0, 2]");
  if (!(c.sprite.feather >= 0.0 && c.sprite.feather <= 1.0)) fail("sprite feather must be in [0, 1]");
  if (!(c.background.fps > 0.0)) fail("background fps must be > 0");
  if (c.control.port < 0 || c.control.port > 65535) fail("control port must be in [0, 65535]");
  if (c.source.synthetic_faces < 0 || c.source.synthetic_faces > 6) {
    fail("source synthetic_faces must be in [0, 6]");
  }
  const std::string& src = c.source.spec;
  if (!(src == "synthetic" || src == "null" || src == "camera" || src.rfind("camera:", 0) == 0 ||
        (src.rfind("dir:", 0) == 0 && src.size() > 4))) {
    fail("source must be synthetic, dir:PATH, camera[:DEVICE] or null, got '" + src + "'");
  }
  const std::string& sink = c.sink.spec;
  if (!(sink == "null" || sink == "window" || (sink.rfind("dir:", 0) == 0 && sink.size() > 4))) {
    fail("sink must be window, dir:PATH or null, got '" + sink + "'");
  }
  try {
    detect::validate(c.detector);
    track::validate(c.tracker);
    snow::validate(c.snow_params());
    runtime::validate(c.thermal);
    compose::validate(c.slot_geometry(), p.output);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

std::string config_to_json(const EngineConfig& config, int indent) { return to_json(config).dump(indent); }

std::string config_hash(const EngineConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace snowframe::runtime
