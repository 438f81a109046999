#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "snowframe/control/control.hpp"
#include "snowframe/errors.hpp"
#include "snowframe/png_io.hpp"
#include "support/control_stress.hpp"
#include "support/engine_support.hpp"

using namespace snowframe;
using namespace snowframe::runtime;
using namespace snowframe::control;
namespace t = snowframe::testing;
using nlohmann::json;
using namespace std::chrono_literals;
namespace fs = std::filesystem;

namespace {

/// Response bodies collected here are validated against docs/schemas by a
/// separate test.
void keep(const std::string& name, const std::string& body) {
  const char* dir = std::getenv("SNOWFRAME_RESPONSE_DIR");
  if (!dir) return;
  fs::create_directories(dir);
  std::ofstream(fs::path(dir) / (name + ".json")) << body;
}

ControlResponse call(const ControlService& s, Route r, std::optional<std::string> auth = std::nullopt) {
  return s.handle({r, std::move(auth)});
}

json body(const ControlResponse& r) { return json::parse(r.body); }

class BrokenSource final : public PacedSource {
 public:
  BrokenSource() : PacedSource(30.0, std::nullopt, true) {}
  std::string describe() const override { return "broken"; }

 protected:
  Rgba8Frame render(std::uint64_t) override { throw IoError("usb camera disconnected"); }
};

}  // namespace

TEST_CASE("routes map one to one onto HTTP method and path") {
  const std::vector<std::tuple<Route, std::string, std::string>> table = {
      {Route::GetHealth, "GET", "/health"},       {Route::Sleep, "POST", "/sleep"},
      {Route::Wake, "POST", "/wake"},             {Route::GetFrameSnapshot, "GET", "/frame.png"},
      {Route::GetCameraSnapshot, "GET", "/camera.png"}, {Route::GetConfig, "GET", "/config"}};
  for (const auto& [route, method, path] : table) {
    CHECK(match_route(method, path) == route);
    CHECK(method_of(route) == method);
    CHECK(path_of(route) == path);
    CHECK(path_known(path));
    CHECK_FALSE(match_route(method == "GET" ? "POST" : "GET", path).has_value());
  }
  CHECK(match_route("HEAD", "/health") == Route::GetHealth);
  CHECK_FALSE(match_route("GET", "/healthz").has_value());
  CHECK_FALSE(path_known("/console/"));
  CHECK(is_command(Route::Sleep));
  CHECK_FALSE(is_command(Route::GetConfig));
}

TEST_CASE("timestamps are UTC ISO-8601 with milliseconds") {
  using std::chrono::system_clock;
  CHECK(iso8601(system_clock::time_point{}) == "1970-01-01T00:00:00.000Z");
  CHECK(iso8601(system_clock::time_point{std::chrono::milliseconds(1700000000250)}) == "2023-11-14T22:13:20.250Z");
  CHECK(iso8601(system_clock::time_point{std::chrono::milliseconds(951782400999)}) == "2000-02-29T00:00:00.999Z");
}

TEST_CASE("health report carries every telemetry field") {
  Telemetry tm;
  tm.state = EngineState::faulted("fan stalled");
  tm.fps_out = 59.75;
  tm.detect_hz = 9.5;
  tm.temp_c = 41.25;
  tm.fan = false;
  tm.face_count = 2;
  tm.slots[0] = SlotReport{7, {10, 20, 30, 40}};
  tm.slots[2] = SlotReport{9, {100, 120, 64, 64}};
  tm.uptime_s = 123.5;
  tm.frames_composed = 7410;
  tm.frames_captured = 3705;
  tm.frames_dropped = 3;
  tm.detections_run = 1235;
  tm.last_frame_at = std::chrono::system_clock::time_point{std::chrono::milliseconds(1700000000000)};
  tm.camera = {1920, 1080};
  const std::string text = health_json(tm, "0123456789abcdef",
                                       std::chrono::system_clock::time_point{std::chrono::milliseconds(1700000000500)});
  keep("health_faulted", text);
  const json j = json::parse(text);
  CHECK(j["version"] == version());
  CHECK(j["config_hash"] == "0123456789abcdef");
  CHECK(j["state"] == "faulted");
  CHECK(j["fault_reason"] == "fan stalled");
  CHECK(j["fps_out"].get<double>() == 59.75);
  CHECK(j["detect_hz"].get<double>() == 9.5);
  CHECK(j["temp_c"].get<double>() == 41.25);
  CHECK(j["fan"] == false);
  CHECK(j["face_count"] == 2);
  CHECK(j["slot_occupancy"] == json::array({true, false, true, false}));
  CHECK(j["slots"][0] == json{{"slot", 0}, {"track_id", 7}, {"rect", {{"x", 10}, {"y", 20}, {"w", 30}, {"h", 40}}}});
  CHECK(j["slots"][1].is_null());
  CHECK(j["slots"][2]["track_id"] == 9);
  CHECK(j["camera"] == json{{"width", 1920}, {"height", 1080}});
  CHECK(j["uptime_s"].get<double>() == 123.5);
  CHECK(j["frames_composed"] == 7410);
  CHECK(j["frames_captured"] == 3705);
  CHECK(j["frames_dropped"] == 3);
  CHECK(j["detections_run"] == 1235);
  CHECK(j["last_frame_at"] == "2023-11-14T22:13:20.000Z");
  CHECK(j["generated_at"] == "2023-11-14T22:13:20.500Z");

  Telemetry fresh;
  const json f = json::parse(health_json(fresh, "x", std::chrono::system_clock::now()));
  CHECK(f["fault_reason"].is_null());
  CHECK(f["last_frame_at"].is_null());
  CHECK(f["state"] == "initializing");
}

TEST_CASE("control service against a running engine") {
  const EngineConfig c = t::small_engine_config(ClockMode::Realtime);
  Engine e(c, t::synthetic_components(c, 0));
  const ControlService s(e);

  // Nothing composed before the engine runs.
  const ControlResponse none = call(s, Route::GetFrameSnapshot);
  CHECK(none.status == 404);
  keep("error_no_frame", none.body);
  CHECK(call(s, Route::GetCameraSnapshot).status == 404);

  t::EngineThread th(e);
  REQUIRE(t::wait_until([&] { return e.telemetry().state.kind == StateKind::Running && e.latest_camera(); }));

  const ControlResponse h = call(s, Route::GetHealth);
  CHECK(h.status == 200);
  CHECK(h.content_type == "application/json");
  keep("health_running", h.body);
  CHECK(body(h)["state"] == "running");
  CHECK(body(h)["face_count"] == 0);
  CHECK(body(h)["config_hash"] == config_hash(c));

  const ControlResponse sl = call(s, Route::Sleep);
  CHECK(sl.status == 200);
  keep("command_applied", sl.body);
  CHECK(body(sl)["state"] == "sleeping");
  CHECK(body(sl)["previous"] == "running");
  CHECK(body(sl)["result"] == "applied");
  CHECK(body(sl)["actions"] == json::array({"pause_pipeline", "flush_sinks", "release_source", "persist_tracker"}));
  CHECK(body(call(s, Route::GetHealth))["state"] == "sleeping");

  const ControlResponse sl2 = call(s, Route::Sleep);
  CHECK(sl2.status == 200);
  keep("command_noop", sl2.body);
  CHECK(body(sl2)["result"] == "no-op");
  CHECK(body(sl2)["noop"] == true);
  CHECK(body(sl2)["state"] == "sleeping");

  CHECK(body(call(s, Route::Wake))["state"] == "running");
  const ControlResponse w2 = call(s, Route::Wake);
  CHECK(w2.status == 200);
  CHECK(body(w2)["result"] == "no-op");
  CHECK(body(w2)["state"] == "running");

  const ControlResponse png = call(s, Route::GetFrameSnapshot);
  CHECK(png.status == 200);
  CHECK(png.content_type == "image/png");
  const Rgba8Frame frame = decode_png(std::span(reinterpret_cast<const std::uint8_t*>(png.body.data()), png.body.size()));
  CHECK(frame.size() == c.pipeline.output);
  const ControlResponse cam = call(s, Route::GetCameraSnapshot);
  CHECK(cam.status == 200);
  CHECK(decode_png(std::span(reinterpret_cast<const std::uint8_t*>(cam.body.data()), cam.body.size())).size() ==
        c.pipeline.capture);

  const ControlResponse cfg = call(s, Route::GetConfig);
  CHECK(cfg.status == 200);
  keep("config_active", cfg.body);
  CHECK(config_hash(parse_config(cfg.body)) == config_hash(c));
  CHECK(th.stop() == 0);
}

TEST_CASE("bearer token guards the command routes") {
  const EngineConfig c = t::small_engine_config(ClockMode::Realtime);
  Engine e(c, t::synthetic_components(c, 0));
  const ControlService s(e, std::string("s3cret"));
  t::EngineThread th(e);
  REQUIRE(t::wait_until([&] { return e.state().kind == StateKind::Running; }));
  const ControlResponse missing = call(s, Route::Sleep);
  CHECK(missing.status == 401);
  keep("error_unauthorized", missing.body);
  CHECK(call(s, Route::Sleep, "Bearer wrong").status == 401);
  CHECK(call(s, Route::Wake, "s3cret").status == 401);
  CHECK(e.state().kind == StateKind::Running);
  CHECK(call(s, Route::GetHealth).status == 200);
  CHECK(call(s, Route::Sleep, "Bearer s3cret").status == 200);
  CHECK(e.state().kind == StateKind::Sleeping);
  CHECK(th.stop() == 0);
}

TEST_CASE("a faulted engine answers commands with 503 and the reason") {
  const EngineConfig c = t::small_engine_config(ClockMode::Realtime);
  Pipeline::Components comp = t::synthetic_components(c, 0);
  comp.source = std::make_unique<BrokenSource>();
  EngineOptions o;
  o.exit_on_fault = false;
  Engine e(c, std::move(comp), o);
  const ControlService s(e);
  t::EngineThread th(e);
  REQUIRE(t::wait_until([&] { return e.state().kind == StateKind::Faulted; }));
  for (Route r : {Route::Sleep, Route::Wake}) {
    const ControlResponse resp = call(s, r);
    CHECK(resp.status == 503);
    CHECK(body(resp)["state"] == "faulted");
    CHECK(body(resp)["fault_reason"].get<std::string>().find("usb camera disconnected") != std::string::npos);
    keep("error_faulted", resp.body);
  }
  const ControlResponse h = call(s, Route::GetHealth);
  CHECK(h.status == 200);
  CHECK(body(h)["state"] == "faulted");
  CHECK(th.stop() == 1);
}

TEST_CASE("HTTP server serves the routes, the console and errors") {
  const fs::path console = fs::temp_directory_path() / "snowframe_console_test";
  fs::create_directories(console);
  std::ofstream(console / "index.html") << "<!doctype html><title>console</title>";

  const EngineConfig c = t::small_engine_config(ClockMode::Realtime);
  Engine e(c, t::synthetic_components(c, 0));
  const ControlService s(e, std::string("tok"));
  ControlServer server(s, "127.0.0.1", 0, console);
  server.start();
  REQUIRE(server.port() > 0);
  t::EngineThread th(e);
  REQUIRE(t::wait_until([&] { return e.latest_frame() != nullptr; }));

  httplib::Client cli("127.0.0.1", server.port());
  auto h = cli.Get("/health");
  REQUIRE(h);
  CHECK(h->status == 200);
  CHECK(h->get_header_value("Content-Type") == "application/json");
  CHECK(json::parse(h->body)["state"] == "running");

  CHECK(cli.Post("/sleep")->status == 401);
  auto sl = cli.Post("/sleep", httplib::Headers{{"Authorization", "Bearer tok"}});
  CHECK(sl->status == 200);
  CHECK(json::parse(sl->body)["state"] == "sleeping");
  CHECK(json::parse(cli.Get("/health")->body)["state"] == "sleeping");
  CHECK(json::parse(cli.Post("/wake", httplib::Headers{{"Authorization", "Bearer tok"}})->body)["state"] == "running");

  auto png = cli.Get("/frame.png");
  CHECK(png->status == 200);
  CHECK(png->get_header_value("Content-Type") == "image/png");
  CHECK(png->body.substr(1, 3) == "PNG");
  CHECK(cli.Get("/config")->status == 200);

  auto missing = cli.Get("/nope");
  CHECK(missing->status == 404);
  keep("error_not_found", missing->body);
  auto wrong = cli.Get("/sleep");
  CHECK(wrong->status == 405);
  keep("error_method", wrong->body);

  auto page = cli.Get("/console/index.html");
  REQUIRE(page);
  CHECK(page->status == 200);
  CHECK(page->body.find("console") != std::string::npos);
  CHECK(cli.Get("/console/")->status == 200);
  CHECK(cli.Get("/console/missing.js")->status == 404);

  CHECK(th.stop() == 0);
  server.stop();
  fs::remove_all(console);
}

TEST_CASE("server without a console directory and busy ports") {
  const EngineConfig c = t::small_engine_config(ClockMode::Realtime);
  Engine e(c, t::synthetic_components(c, 0));
  const ControlService s(e);
  ControlServer a(s, "127.0.0.1", 0);
  a.start();
  httplib::Client cli("127.0.0.1", a.port());
  CHECK(cli.Get("/console/")->status == 404);
  ControlServer b(s, "127.0.0.1", a.port());
  CHECK_THROWS_AS(b.start(), IoError);
}

TEST_CASE("1000 random sleep/wake/health requests over HTTP stay legal") {
  const EngineConfig c = t::small_engine_config(ClockMode::Realtime);
  Engine e(c, t::synthetic_components(c, 1));
  const ControlService s(e);
  ControlServer server(s, "127.0.0.1", 0);
  server.start();
  t::EngineThread th(e);
  REQUIRE(t::wait_until([&] { return e.state().kind == StateKind::Running; }));
  const t::StressResult r = t::control_stress(server.port(), 1000, 4, 99);
  for (const auto& p : r.problems) MESSAGE(p);
  CHECK(r.failures == 0);
  CHECK(r.seconds < 60.0);
  const StateKind k = e.state().kind;
  CHECK((k == StateKind::Running || k == StateKind::Sleeping));
  CHECK(th.stop() == 0);
}
