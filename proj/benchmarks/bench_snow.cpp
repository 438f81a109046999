#include <benchmark/benchmark.h>

#include "snowframe/snow/rng.hpp"
#include "snowframe/snow/snowfall.hpp"

using namespace snowframe;
using namespace snowframe::snow;

namespace {

SnowState warm(const SnowParams& p) {
  SnowState s = initial_snow_state(p);
  for (int i = 0; i < 600; ++i) snow_step_inplace(s, p, 1.0 / 60.0);
  return s;
}

void BM_SnowStep(benchmark::State& st) {
  SnowParams p;
  p.max_flakes = static_cast<int>(st.range(0));
  p.spawn_rate = p.max_flakes / 5.0;
  SnowState s = warm(p);
  for (auto _ : st) snow_step_inplace(s, p, 1.0 / 60.0);
  st.counters["flakes"] = static_cast<double>(s.flakes.size());
}
BENCHMARK(BM_SnowStep)->Arg(600)->Arg(5000);

void BM_SnowRaster(benchmark::State& st) {
  SnowParams p;
  p.max_flakes = static_cast<int>(st.range(0));
  p.spawn_rate = p.max_flakes / 5.0;
  const SnowState s = warm(p);
  Rgba8Frame frame(p.bounds.width, p.bounds.height, true);
  for (auto _ : st) {
    std::fill(frame.pixels().begin(), frame.pixels().end(), std::uint8_t{0});
    snow_raster_into(frame, s);
    benchmark::ClobberMemory();
  }
  st.counters["flakes"] = static_cast<double>(s.flakes.size());
}
BENCHMARK(BM_SnowRaster)->Arg(600)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Xoshiro(benchmark::State& st) {
  Xoshiro256 g(1);
  for (auto _ : st) benchmark::DoNotOptimize(g.next());
}
BENCHMARK(BM_Xoshiro);

}  // namespace
