#include <benchmark/benchmark.h>

#include "snowframe/detect/cascade.hpp"
#include "snowframe/detect/detector.hpp"
#include "snowframe/detect/integral.hpp"
#include "snowframe/png_io.hpp"
#include "snowframe/version.hpp"

using namespace snowframe;

namespace {

const detect::CascadeModel& model() {
  static const auto m = detect::load_cascade(find_data_file("cascades/haarcascade_frontalface_default.xml"));
  return m;
}

GrayImage textured(int w, int h) {
  GrayImage g(w, h);
  std::uint32_t s = 12345;
  for (auto& v : g.samples()) {
    s = s * 1664525u + 1013904223u;
    v = static_cast<std::uint8_t>(s >> 24);
  }
  return g;
}

void BM_IntegralImages(benchmark::State& st) {
  const GrayImage g = textured(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(detect::integral_images(g));
  st.SetItemsProcessed(st.iterations() * g.width() * g.height());
}
BENCHMARK(BM_IntegralImages)->Args({480, 270})->Args({1920, 1080});

void BM_LoadCascade(benchmark::State& st) {
  const auto path = find_data_file("cascades/haarcascade_frontalface_default.xml");
  for (auto _ : st) benchmark::DoNotOptimize(detect::load_cascade(path));
}
BENCHMARK(BM_LoadCascade)->Unit(benchmark::kMillisecond);

// The runtime detector setting: a quarter of 1920x1080, scale step 1.2.
void BM_DetectRuntime(benchmark::State& st) {
  const Rgba8Frame frame = read_png(find_data_file("faces/face_0.png"));
  GrayImage canvas = textured(480, 270);
  const GrayImage face = resize_area(to_gray(frame), {80, 80});
  for (int y = 0; y < 80; ++y)
    for (int x = 0; x < 80; ++x) canvas.at(200 + x, 90 + y) = face.at(x, y);
  detect::DetectParams p;
  p.scale_factor = 1.2;
  p.min_size = {24, 24};
  for (auto _ : st) benchmark::DoNotOptimize(detect::detect_multiscale(model(), canvas, p));
}
BENCHMARK(BM_DetectRuntime)->Unit(benchmark::kMillisecond);

void BM_GrayDownscale(benchmark::State& st) {
  const Rgba8Frame frame = Rgba8Frame::filled(1920, 1080, Rgba{120, 80, 40, 255}, true);
  for (auto _ : st) benchmark::DoNotOptimize(to_gray_downscaled(frame, 0.25));
}
BENCHMARK(BM_GrayDownscale)->Unit(benchmark::kMillisecond);

}  // namespace
