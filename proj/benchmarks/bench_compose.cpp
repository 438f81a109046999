#include <benchmark/benchmark.h>

#include "snowframe/compose/background.hpp"
#include "snowframe/compose/compose.hpp"
#include "snowframe/pixel_math.hpp"
#include "snowframe/snow/snowfall.hpp"

using namespace snowframe;
using namespace snowframe::compose;

namespace {

Scene full_scene(Size out) {
  const SlotGeometry g = default_slot_geometry(out);
  auto bg = std::make_shared<const Rgba8Frame>(procedural_background(out, g));
  const Rgba8Frame camera = Rgba8Frame::filled(1920, 1080, Rgba{150, 120, 100, 255}, true);
  SpriteList sprites;
  for (int s = 0; s < kFigureCount; ++s) {
    sprites.emplace_back(s, std::make_shared<const Rgba8Frame>(
                                extract_face_sprite(camera, Rect{200 + 300 * s, 300, 180, 180}, 0.25, 0.2)));
  }
  snow::SnowParams sp;
  sp.bounds = out;
  snow::SnowState st = snow::initial_snow_state(sp);
  for (int i = 0; i < 480; ++i) snow::snow_step_inplace(st, sp, 1.0 / 60.0);
  auto layer = std::make_shared<const Rgba8Frame>(snow::snow_raster(st, out));
  return build_scene(bg, sprites, g, layer, out);
}

void BM_CompositeFrame(benchmark::State& st) {
  const Scene s = full_scene({1280, 800});
  const int workers = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(composite(s, workers));
  st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_CompositeFrame)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_ExtractSprite(benchmark::State& st) {
  const Rgba8Frame camera = Rgba8Frame::filled(1920, 1080, Rgba{150, 120, 100, 255}, true);
  for (auto _ : st) benchmark::DoNotOptimize(extract_face_sprite(camera, Rect{800, 400, 240, 240}, 0.25, 0.2));
}
BENCHMARK(BM_ExtractSprite);

void BM_OverScalar(benchmark::State& st) {
  std::uint8_t d = 17;
  for (auto _ : st) {
    for (int s = 0; s < 256; ++s) d = pixel::over(static_cast<std::uint8_t>(s / 2), d, static_cast<std::uint8_t>(s));
    benchmark::DoNotOptimize(d);
  }
  st.SetItemsProcessed(st.iterations() * 256);
}
BENCHMARK(BM_OverScalar);

}  // namespace
