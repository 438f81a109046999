// One PASS/FAIL line per acceptance criterion. Tolerances are fixed below.
// Exit status is 0 only if every line passes.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "snowframe/compose/compose.hpp"
#include "snowframe/control/control.hpp"
#include "snowframe/detect/cascade.hpp"
#include "snowframe/detect/integral.hpp"
#include "snowframe/runtime/engine.hpp"
#include "snowframe/runtime/thermal.hpp"
#include "support/cascade_scan.hpp"
#include "support/control_stress.hpp"
#include "support/engine_support.hpp"
#include "support/lifecycle_table.hpp"
#include "support/parity.hpp"

using namespace snowframe;
using namespace snowframe::runtime;
namespace t = snowframe::testing;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr int kIntegralImages = 1000;
constexpr int kIntegralMaxSide = 128;
constexpr double kIntegralBudgetS = 60.0;
constexpr int kMinFacePhotos = 20;
constexpr double kParityIou = 0.6;
constexpr double kParityFraction = 0.90;
constexpr int kMinCleanNegatives = 8;
constexpr double kCapIou = 0.9;
constexpr Size kOutput{1280, 800};
constexpr double kPacingSeconds = 10.0;
constexpr double kThroughputTarget = 30.0;
constexpr double kThroughputGate = 20.0;
constexpr double kThroughputSeconds = 5.0;
constexpr double kFanOnSteady = 25.0;
constexpr double kFanOnTol = 0.5;
constexpr double kFanOffStart = 25.0;
constexpr double kFanOffThreshold = 40.0;
constexpr double kThermalBudgetS = 1.0;
constexpr int kStressRequests = 1000;
constexpr double kStressBudgetS = 60.0;
constexpr int kDeterminismFrames = 300;
constexpr int kAlgebraPixels = 100000;  // 400 x 250
constexpr int kAssociativityLsb = 1;

struct Line {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const detect::CascadeModel& stock() { return *t::shared_cascade(); }

EngineConfig default_file_config() {
  EngineConfig c = load_config(t::source_dir() / "config" / "default.json");
  c.pipeline.clock = ClockMode::Simulated;
  return c;
}

Line cascade_load() {
  const std::string text = t::read_text(t::stock_cascade());
  const detect::CascadeModel m = detect::parse_cascade(text);
  const std::size_t stages = t::scan_stage_count(text), feats = t::scan_occurrences(text, "<rects>"),
                    weak = t::scan_occurrences(text, "<internalNodes>");
  const bool ok = m.stages.size() == stages && m.features.size() == feats && m.weak_count() == weak;
  return {ok, fmt("stages %zu/%zu, features %zu/%zu, weak %zu/%zu (exact)", m.stages.size(), stages,
                  m.features.size(), feats, m.weak_count(), weak)};
}

Line integral_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20141021);
  std::uniform_int_distribution<int> side(1, kIntegralMaxSide);
  std::size_t entries = 0, mismatches = 0;
  for (int n = 0; n < kIntegralImages; ++n) {
    const int w = side(rng), h = side(rng);
    const GrayImage img = t::random_gray(rng, w, h);
    const detect::IntegralPair ii = detect::integral_images(img);
    for (int y = 0; y <= h; ++y)
      for (int x = 0; x <= w; ++x) {
        std::int64_t s = 0, q = 0;
        for (int yy = 0; yy < y; ++yy)
          for (int xx = 0; xx < x; ++xx) {
            const std::int64_t v = img.at(xx, yy);
            s += v;
            q += v * v;
          }
        mismatches += (ii.sum_at(x, y) != s) + (ii.sqsum_at(x, y) != q);
        entries += 2;
      }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kIntegralBudgetS,
          fmt("%d images, %zu entries, %zu mismatches, %.1f s (exact, < %.0f s)", kIntegralImages, entries,
              mismatches, secs, kIntegralBudgetS)};
}

Line detector_parity() {
  const t::ParityResult r = t::corpus_parity(stock());
  const auto ref = t::corpus_reference();
  int photos = 0;
  for (const auto& img : ref["images"]) photos += img["kind"] == "face";
  const bool ok = photos >= kMinFacePhotos && r.matched >= kParityFraction * r.faces &&
                  r.clean_negatives >= kMinCleanNegatives;
  return {ok, fmt("%d/%d reference faces paired at IoU >= %.1f (%.1f%%, need %.0f%%) over %d photos; "
                  "%d/%d negatives clean (need %d)",
                  r.matched, r.faces, kParityIou, 100.0 * r.matched / r.faces, 100 * kParityFraction, photos,
                  r.clean_negatives, r.negatives, kMinCleanNegatives)};
}

Line four_face_cap() {
  const t::SixFaceResult r = t::six_face_cap(stock());
  return {r.count == 4 && r.matched_largest == 4,
          fmt("%zu detections, %d/4 paired one-to-one with the 4 largest reference faces at IoU >= %.1f "
              "(worst %.3f)",
              r.count, r.matched_largest, kCapIou, r.worst_iou)};
}

Line output_and_pacing() {
  const EngineConfig c = default_file_config();
  int wrong_size = 0;
  std::uint64_t written = 0;
  auto sink = std::make_unique<CallbackSink>([&](const Rgba8Frame& f, std::uint64_t) {
    wrong_size += f.size() != kOutput;
    ++written;
  });
  EngineOptions o;
  const auto expect_out = static_cast<std::uint64_t>(kPacingSeconds * c.pipeline.output_fps);
  const auto expect_cap = static_cast<std::uint64_t>(kPacingSeconds * c.pipeline.capture_fps);
  o.frame_limit = expect_out;
  Pipeline::Components comp = make_components(c);
  comp.sink = std::move(sink);
  Engine e(c, std::move(comp), o);
  const int code = e.run();
  const Telemetry tm = e.telemetry();
  const bool ok = code == 0 && wrong_size == 0 && c.pipeline.output == kOutput && written == expect_out &&
                  tm.frames_composed == expect_out && tm.frames_captured == expect_out / 2 &&
                  tm.frames_captured == expect_cap && tm.frames_dropped == 0 && tm.camera == Size{1920, 1080};
  return {ok, fmt("%llu frames of %dx%d (%d off-size), %llu composed / %llu captured in %.0f simulated s "
                  "(exact %llu / %llu), camera %dx%d",
                  static_cast<unsigned long long>(written), kOutput.width, kOutput.height, wrong_size,
                  static_cast<unsigned long long>(tm.frames_composed),
                  static_cast<unsigned long long>(tm.frames_captured), kPacingSeconds,
                  static_cast<unsigned long long>(expect_out), static_cast<unsigned long long>(expect_cap),
                  tm.camera.width, tm.camera.height)};
}

Line throughput() {
  EngineConfig c = default_file_config();
  c.pipeline.clock = ClockMode::Realtime;
  c.sink.spec = "null";
  Engine e(c, make_components(c));
  t::EngineThread th(e);
  t::wait_until([&] { return e.telemetry().frames_composed > 0; });
  std::this_thread::sleep_for(std::chrono::milliseconds(500));
  const Telemetry a = e.telemetry();
  std::this_thread::sleep_for(std::chrono::duration<double>(kThroughputSeconds));
  const Telemetry b = e.telemetry();
  th.stop();
  const double fps = (b.frames_composed - a.frames_composed) / (b.uptime_s - a.uptime_s);
  return {fps >= kThroughputGate,
          fmt("%.1f composed 1280x800 frames/s over %.1f s on %u hardware threads, detect %.1f Hz "
              "(target %.0f, gate %.0f; paced at %.0f)",
              fps, b.uptime_s - a.uptime_s, std::thread::hardware_concurrency(), b.detect_hz, kThroughputTarget,
              kThroughputGate, c.pipeline.output_fps)};
}

Line thermal() {
  const auto t0 = std::chrono::steady_clock::now();
  const ThermalParams p;
  ThermalModel on = ThermalModel::at_ambient(p, true);
  for (int i = 0; i < 7200; ++i) on = thermal_step(on, 1.0, 1.0);
  ThermalModel off = ThermalModel::at_ambient(p, false);
  off.temp = kFanOffStart;
  const double cross = time_to_reach(off, 1.0, kFanOffThreshold, 1.0, 36000.0);
  ThermalModel off_end = off;
  for (int i = 0; i < 7200; ++i) off_end = thermal_step(off_end, 1.0, 1.0);
  const double secs = seconds_since(t0);
  const bool ok = std::abs(on.temp - kFanOnSteady) <= kFanOnTol && cross > 0 && secs < kThermalBudgetS;
  return {ok, fmt("fan on settles at %.3f C (%.1f +- %.1f); fan off from %.0f C crosses %.0f C after %.0f s, "
                  "%.2f C after 2 h; %.3f s",
                  on.temp, kFanOnSteady, kFanOnTol, kFanOffStart, kFanOffThreshold, cross, off_end.temp, secs)};
}

Line lifecycle() {
  const auto table = t::expected_table();
  int cells = 0, wrong = 0;
  for (StateKind s : kAllStates)
    for (EventKind ev : kAllEvents) {
      const EngineState st = s == StateKind::Faulted ? EngineState::faulted("x") : EngineState{s, {}};
      const Transition tr = transition(st, ev == EventKind::FaultRaised ? LifecycleEvent::fault("y")
                                                                        : LifecycleEvent{ev, {}});
      const auto& want = table.at({s, ev});
      ++cells;
      wrong += tr.next.kind != want.next || tr.actions != want.actions;
    }

  const EngineConfig c = t::small_engine_config(ClockMode::Realtime);
  Engine e(c, t::synthetic_components(c, 1));
  const control::ControlService service(e);
  control::ControlServer server(service, "127.0.0.1", 0);
  server.start();
  t::EngineThread th(e);
  t::wait_until([&] { return e.state().kind == StateKind::Running; });
  const t::StressResult r = t::control_stress(server.port(), kStressRequests, 4, 7);
  const StateKind final_state = e.state().kind;
  const int code = th.stop();
  server.stop();
  const bool legal = final_state == StateKind::Running || final_state == StateKind::Sleeping;
  const bool ok = wrong == 0 && r.failures == 0 && legal && r.seconds < kStressBudgetS && code == 0;
  return {ok, fmt("table %d/%d cells; %d HTTP sleep/wake/health requests, %d failures, final state %s, "
                  "%.1f s (< %.0f s)",
                  cells - wrong, cells, r.requests, r.failures, std::string(to_string(final_state)).c_str(), r.seconds,
                  kStressBudgetS)};
}

Line determinism() {
  const fs::path root = fs::temp_directory_path() / "snowframe_acceptance_determinism";
  fs::remove_all(root);
  auto run = [&](const std::string& name) {
    EngineConfig c = default_file_config();
    c.seed = 7;
    c.sink.spec = "dir:" + (root / name).string();
    EngineOptions o;
    o.frame_limit = kDeterminismFrames;
    Engine e(c, make_components(c), o);
    return e.run();
  };
  const int c1 = run("a"), c2 = run("b");
  int identical = 0, files = 0;
  for (int i = 0; i < kDeterminismFrames; ++i) {
    const std::string n = DirSink::file_name(i);
    if (!fs::exists(root / "a" / n) || !fs::exists(root / "b" / n)) continue;
    ++files;
    identical += t::read_text(root / "a" / n) == t::read_text(root / "b" / n);
  }
  fs::remove_all(root);
  return {c1 == 0 && c2 == 0 && files == kDeterminismFrames && identical == kDeterminismFrames,
          fmt("%d/%d PNG frames byte-identical across two seeded runs at 1280x800", identical, kDeterminismFrames)};
}

Line compositor_algebra() {
  using compose::Layer;
  const int w = 400, h = kAlgebraPixels / 400;
  std::mt19937_64 rng(314159);
  auto share = [](Rgba8Frame f) { return std::make_shared<const Rgba8Frame>(std::move(f)); };
  const Rect full{0, 0, w, h};

  // Opaque top dominance.
  Rgba8Frame top = t::random_premultiplied(rng, w, h);
  for (std::size_t k = 3; k < top.pixels().size(); k += 4) top.data()[k] = 255;
  compose::Scene s{{w, h}, {}};
  for (int i = 0; i < 4; ++i) s.layers.push_back(Layer{i, share(t::random_premultiplied(rng, w, h)), full, 1.0, nullptr});
  s.layers.push_back(Layer{50, share(top), full, 1.0, nullptr});
  const bool dominance = compose::composite(s) == top;

  // Regrouping: A over (B over C) against (A over B) over C.
  const auto A = share(t::random_premultiplied(rng, w, h));
  const auto B = share(t::random_premultiplied(rng, w, h));
  const Rgba8Frame C = t::random_premultiplied(rng, w, h);
  Rgba8Frame left = C;
  compose::draw_layer(left, Layer{0, B, full, 1.0, nullptr});
  compose::draw_layer(left, Layer{0, A, full, 1.0, nullptr});
  Rgba8Frame ab(w, h, true);
  compose::draw_layer(ab, Layer{0, B, full, 1.0, nullptr});
  compose::draw_layer(ab, Layer{0, A, full, 1.0, nullptr});
  Rgba8Frame right = C;
  compose::draw_layer(right, Layer{0, share(std::move(ab)), full, 1.0, nullptr});
  int worst = 0;
  std::size_t beyond = 0;
  for (std::size_t k = 0; k < left.pixels().size(); ++k) {
    const int d = std::abs(int(left.pixels()[k]) - int(right.pixels()[k]));
    worst = std::max(worst, d);
    beyond += d > kAssociativityLsb;
  }
  return {dominance && worst <= kAssociativityLsb,
          fmt("opaque top dominance %s on %d pixels; regrouping max |diff| %d LSB (need <= %d), "
              "%zu of %zu channels beyond",
              dominance ? "exact" : "BROKEN", kAlgebraPixels, worst, kAssociativityLsb, beyond,
              left.pixels().size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria report", "snowframe-acceptance"};
  std::vector<std::string> only;
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Line()>>> criteria = {
      {"cascade_fixture_load", cascade_load},   {"integral_image_oracle", integral_oracle},
      {"detector_parity", detector_parity},     {"four_face_cap", four_face_cap},
      {"output_format_pacing", output_and_pacing}, {"throughput", throughput},
      {"thermal_reproduction", thermal},        {"lifecycle", lifecycle},
      {"determinism", determinism},             {"compositor_algebra", compositor_algebra},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Line l;
    try {
      l = fn();
    } catch (const std::exception& e) {
      l = {false, std::string("exception: ") + e.what()};
    }
    failed += !l.pass;
    std::printf("%s %-22s %s\n", l.pass ? "PASS" : "FAIL", name.c_str(), l.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
