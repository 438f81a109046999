#include "snowframe/control/control.hpp"

#include <cstdlib>
#include <ctime>

#include "json.hpp"
#include "snowframe/errors.hpp"
#include "snowframe/png_io.hpp"
#include "snowframe/version.hpp"

namespace snowframe::control {

using nlohmann::json;
using runtime::EventKind;
using runtime::StateKind;

namespace {

struct RouteInfo {
  Route route;
  std::string_view method;
  std::string_view path;
};

constexpr RouteInfo kRoutes[] = {
    {Route::GetHealth, "GET", "/health"},
    {Route::Sleep, "POST", "/sleep"},
    {Route::Wake, "POST", "/wake"},
    {Route::GetFrameSnapshot, "GET", "/frame.png"},
    {Route::GetCameraSnapshot, "GET", "/camera.png"},
    {Route::GetConfig, "GET", "/config"},
};

const RouteInfo& info(Route r) {
  for (const auto& i : kRoutes)
    if (i.route == r) return i;
  throw Error("unknown route");
}

ControlResponse json_response(int status, const json& body) { return {status, "application/json", body.dump()}; }

ControlResponse error_response(int status, std::string message, const runtime::EngineState* state = nullptr) {
  json j{{"error", std::move(message)}};
  if (state) {
    j["state"] = to_string(state->kind);
    j["fault_reason"] = state->kind == StateKind::Faulted ? json(state->fault_reason) : json(nullptr);
  }
  return json_response(status, j);
}

json rect_json(const Rect& r) { return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

}  // namespace

std::optional<Route> match_route(std::string_view method, std::string_view path) {
  for (const auto& i : kRoutes)
    if (i.path == path && i.method == method) return i.route;
  // HEAD is answered like GET by the transport.
  if (method == "HEAD") return match_route("GET", path);
  return std::nullopt;
}

bool path_known(std::string_view path) {
  for (const auto& i : kRoutes)
    if (i.path == path) return true;
  return false;
}

std::string_view method_of(Route r) { return info(r).method; }
std::string_view path_of(Route r) { return info(r).path; }
bool is_command(Route r) { return r == Route::Sleep || r == Route::Wake; }

std::string iso8601(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms >= 0 ? ms / 1000 : (ms - 999) / 1000);
  const int frac = static_cast<int>(ms - static_cast<long long>(secs) * 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
  return buf;
}

std::string health_json(const runtime::Telemetry& t, std::string_view config_hash,
                        std::chrono::system_clock::time_point generated_at) {
  json slots = json::array();
  json occupancy = json::array();
  for (std::size_t i = 0; i < t.slots.size(); ++i) {
    occupancy.push_back(t.slots[i].has_value());
    if (t.slots[i]) {
      slots.push_back({{"slot", i}, {"track_id", t.slots[i]->track_id}, {"rect", rect_json(t.slots[i]->rect)}});
    } else {
      slots.push_back(nullptr);
    }
  }
  json j{
      {"version", version()},
      {"config_hash", config_hash},
      {"state", to_string(t.state.kind)},
      {"fault_reason", t.state.kind == StateKind::Faulted ? json(t.state.fault_reason) : json(nullptr)},
      {"fps_out", t.fps_out},
      {"detect_hz", t.detect_hz},
      {"temp_c", t.temp_c},
      {"fan", t.fan},
      {"face_count", t.face_count},
      {"slot_occupancy", occupancy},
      {"slots", slots},
      {"camera", {{"width", t.camera.width}, {"height", t.camera.height}}},
      {"uptime_s", t.uptime_s},
      {"frames_composed", t.frames_composed},
      {"frames_captured", t.frames_captured},
      {"frames_dropped", t.frames_dropped},
      {"detections_run", t.detections_run},
      {"last_frame_at", t.last_frame_at ? json(iso8601(*t.last_frame_at)) : json(nullptr)},
      {"generated_at", iso8601(generated_at)},
  };
  return j.dump();
}

std::optional<std::string> token_from_env() {
  const char* v = std::getenv("SNOWFRAME_CONTROL_TOKEN");
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

ControlService::ControlService(runtime::Engine& engine, std::optional<std::string> token,
                               std::chrono::milliseconds command_timeout)
    : engine_(engine), token_(std::move(token)), timeout_(command_timeout) {}

ControlResponse ControlService::handle(const ControlRequest& request) const {
  if (is_command(request.route) && token_) {
    if (!request.authorization || *request.authorization != "Bearer " + *token_) {
      return error_response(401, "missing or invalid bearer token");
    }
  }
  switch (request.route) {
    case Route::GetHealth:
      return {200, "application/json",
              health_json(engine_.telemetry(), engine_.config_hash(), std::chrono::system_clock::now())};
    case Route::Sleep:
      return command(EventKind::SleepRequested);
    case Route::Wake:
      return command(EventKind::WakeRequested);
    case Route::GetFrameSnapshot:
      return snapshot(false);
    case Route::GetCameraSnapshot:
      return snapshot(true);
    case Route::GetConfig:
      return {200, "application/json", runtime::config_to_json(engine_.config(), -1)};
  }
  return error_response(404, "not found");
}

ControlResponse ControlService::command(EventKind kind) const {
  const runtime::EngineState current = engine_.state();
  if (current.kind == StateKind::Faulted) return error_response(503, "engine faulted", &current);
  runtime::TransitionOutcome outcome;
  try {
    outcome = engine_.request({kind, {}}, timeout_);
  } catch (const Error& e) {
    const runtime::EngineState now = engine_.state();
    return error_response(503, e.what(), &now);
  }
  if (outcome.after.kind == StateKind::Faulted) return error_response(503, "engine faulted", &outcome.after);
  json actions = json::array();
  for (auto a : outcome.actions) actions.push_back(to_string(a));
  return json_response(200, {
                                {"command", kind == EventKind::SleepRequested ? "sleep" : "wake"},
                                {"result", outcome.noop ? "no-op" : "applied"},
                                {"noop", outcome.noop},
                                {"previous", to_string(outcome.before.kind)},
                                {"state", to_string(outcome.after.kind)},
                                {"actions", actions},
                            });
}

ControlResponse ControlService::snapshot(bool camera) const {
  const auto frame = camera ? engine_.latest_camera() : engine_.latest_frame();
  if (!frame) return error_response(404, camera ? "no camera frame yet" : "no composed frame yet");
  const auto bytes = encode_png(frame->premultiplied() ? unpremultiply(*frame) : *frame);
  return {200, "image/png", std::string(bytes.begin(), bytes.end())};
}

}  // namespace snowframe::control
