#include "snowframe/runtime/source.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snowframe/errors.hpp"
#include "snowframe/png_io.hpp"
#include "snowframe/snow/rng.hpp"

namespace snowframe::runtime {

PacedSource::PacedSource(double fps, std::optional<std::uint64_t> length, bool loop)
    : fps_(fps), length_(length), loop_(loop) {
  if (!(fps > 0.0)) throw ValidationError("source fps must be > 0");
}

void PacedSource::open(double now) {
  open_ = true;
  start_ = now;
  next_ = 0;
}

void PacedSource::close() { open_ = false; }

std::uint64_t PacedSource::frames_available(double now) const {
  const double elapsed = (now - start_) * fps_;
  if (elapsed < 0.0) return 0;
  // The tolerance absorbs i / fps rounding so frame i is ready at exactly its time.
  return static_cast<std::uint64_t>(std::floor(elapsed + 1e-9)) + 1;
}

ReadResult PacedSource::read(double now) {
  if (!open_) throw IoError("read from a closed source");
  ReadResult result;
  std::uint64_t available = frames_available(now);
  // End of stream once the period of the last frame has elapsed.
  if (length_ && !loop_ && available > *length_) {
    if (next_ >= *length_) {
      result.end_of_stream = true;
      return result;
    }
    available = *length_;
  }
  if (available <= next_) return result;
  const std::uint64_t newest = available - 1;
  result.dropped = newest - next_;
  const std::uint64_t content = length_ && *length_ > 0 ? newest % *length_ : newest;
  result.frame = CapturedFrame{std::make_shared<const Rgba8Frame>(render(content)),
                               start_ + static_cast<double>(newest) / fps_, newest};
  next_ = available;
  return result;
}

namespace {

Rgba8Frame test_card(Size size) {
  Rgba8Frame card(size.width, size.height, true);
  static constexpr Rgba kBars[] = {{180, 180, 180, 255}, {180, 180, 16, 255}, {16, 180, 180, 255},
                                   {16, 180, 16, 255},   {180, 16, 180, 255}, {180, 16, 16, 255},
                                   {16, 16, 180, 255}};
  const int grid = std::max(8, size.width / 24);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      Rgba c;
      if (y < size.height / 6) {
        c = kBars[static_cast<std::size_t>(x) * 7 / static_cast<std::size_t>(size.width)];
      } else {
        const auto v = static_cast<std::uint8_t>(60 + 60 * y / size.height);
        c = Rgba{v, static_cast<std::uint8_t>(v + 10), static_cast<std::uint8_t>(v + 30), 255};
        if (x % grid == 0 || y % grid == 0) c = Rgba{110, 120, 140, 255};
      }
      card.set_pixel(x, y, c);
    }
  }
  return card;
}

}  // namespace

SyntheticSource::SyntheticSource(Size size, double fps, std::uint64_t seed, std::vector<Rgba8Frame> faces,
                                 int face_count)
    : PacedSource(fps, std::nullopt, true), size_(size), card_(test_card(size)),
      face_count_(faces.empty() ? 0 : face_count) {
  const int side = std::max(8, size.height / 5);
  for (const Rgba8Frame& f : faces) {
    Rgba8Frame opaque = f;
    for (int y = 0; y < opaque.height(); ++y)
      for (int x = 0; x < opaque.width(); ++x) {
        Rgba p = opaque.pixel(x, y);
        p.a = 255;
        opaque.set_pixel(x, y, p);
      }
    opaque.set_premultiplied(true);
    faces_.push_back(resize_bilinear(opaque, {std::min(side, size.width), std::min(side, size.height)}));
  }
  snow::Xoshiro256 rng(seed ^ 0x5eedf00dULL);
  for (int k = 0; k < face_count_; ++k) {
    Path p;
    p.cx = (k + 0.5) / face_count_;
    p.cy = 0.5 + rng.uniform(-0.08, 0.08);
    p.ax = rng.uniform(0.02, 0.5 / face_count_ * 0.6);
    p.ay = rng.uniform(0.02, 0.12);
    p.fx = rng.uniform(0.05, 0.2);
    p.fy = rng.uniform(0.05, 0.2);
    p.px = rng.uniform(0.0, 2.0 * std::numbers::pi);
    p.py = rng.uniform(0.0, 2.0 * std::numbers::pi);
    paths_.push_back(p);
  }
}

Rect SyntheticSource::face_rect(int k, std::uint64_t index) const {
  const Rgba8Frame& face = faces_[static_cast<std::size_t>(k) % faces_.size()];
  const Path& p = paths_[static_cast<std::size_t>(k)];
  const double t = static_cast<double>(index) / fps();
  const double cx = (p.cx + p.ax * std::sin(2.0 * std::numbers::pi * p.fx * t + p.px)) * size_.width;
  const double cy = (p.cy + p.ay * std::sin(2.0 * std::numbers::pi * p.fy * t + p.py)) * size_.height;
  const int x = std::clamp(static_cast<int>(std::lround(cx)) - face.width() / 2, 0, size_.width - face.width());
  const int y = std::clamp(static_cast<int>(std::lround(cy)) - face.height() / 2, 0, size_.height - face.height());
  return {x, y, face.width(), face.height()};
}

Rgba8Frame SyntheticSource::render(std::uint64_t index) {
  Rgba8Frame frame = card_;
  for (int k = 0; k < face_count_; ++k) {
    const Rgba8Frame& face = faces_[static_cast<std::size_t>(k) % faces_.size()];
    const Rect r = face_rect(k, index);
    for (int y = 0; y < r.h; ++y) {
      std::copy_n(face.row(y), 4 * r.w, frame.row(r.y + y) + 4 * r.x);
    }
  }
  return frame;
}

std::vector<std::filesystem::path> list_png_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

DirSource::DirSource(std::filesystem::path dir, double fps, bool loop)
    : PacedSource(fps, list_png_files(dir).size(), loop), dir_(std::move(dir)), files_(list_png_files(dir_)) {
  if (files_.empty()) throw IoError("no PNG frames in " + dir_.string());
}

Rgba8Frame DirSource::render(std::uint64_t index) {
  return premultiply(read_png(files_[static_cast<std::size_t>(index)]));
}

std::vector<Rgba8Frame> load_face_patches(const std::filesystem::path& dir) {
  std::vector<Rgba8Frame> faces;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return faces;
  for (const auto& p : list_png_files(dir)) faces.push_back(read_png(p));
  return faces;
}

}  // namespace snowframe::runtime
