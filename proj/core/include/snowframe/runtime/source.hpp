#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snowframe/geometry.hpp"
#include "snowframe/image.hpp"

namespace snowframe::runtime {

struct CapturedFrame {
  std::shared_ptr<const Rgba8Frame> frame;
  double timestamp = 0.0;  // engine seconds
  std::uint64_t index = 0;  // frame number since open()
};

struct ReadResult {
  std::optional<CapturedFrame> frame;  // newest frame not delivered before
  bool end_of_stream = false;
  std::uint64_t dropped = 0;  // frames skipped to reach the newest one
};

/// A paced frame producer. Frame i of an open source becomes available at
/// open time + i / fps; read(now) never blocks longer than one period.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual void open(double now) = 0;
  virtual ReadResult read(double now) = 0;
  virtual void close() = 0;
  virtual bool is_open() const = 0;
  virtual std::string describe() const = 0;
  /// True when read() itself waits for the next frame (live devices).
  virtual bool self_paced() const { return false; }
};

/// Shared pacing logic for sources whose frame i is a pure function of i.
class PacedSource : public FrameSource {
 public:
  PacedSource(double fps, std::optional<std::uint64_t> length, bool loop);

  void open(double now) override;
  ReadResult read(double now) override;
  void close() override;
  bool is_open() const override { return open_; }

  double fps() const noexcept { return fps_; }

  /// Number of frames with timestamp <= now since open (the pacing rule).
  std::uint64_t frames_available(double now) const;

 protected:
  virtual Rgba8Frame render(std::uint64_t index) = 0;

 private:
  double fps_;
  std::optional<std::uint64_t> length_;
  bool loop_;
  bool open_ = false;
  double start_ = 0.0;
  std::uint64_t next_ = 0;  // first index not yet delivered or skipped
};

/// Moving test card with face patches drifting on smooth deterministic paths.
class SyntheticSource final : public PacedSource {
 public:
  /// `faces` are straight-alpha patches; `face_count` of them (cycled) are
  /// drawn. Positions depend only on the seed and frame index.
  SyntheticSource(Size size, double fps, std::uint64_t seed, std::vector<Rgba8Frame> faces,
                  int face_count);

  std::string describe() const override { return "synthetic"; }

  /// Where face k is pasted in frame `index`, in frame pixels.
  Rect face_rect(int k, std::uint64_t index) const;
  int face_count() const noexcept { return face_count_; }

 protected:
  Rgba8Frame render(std::uint64_t index) override;

 private:
  struct Path {
    double cx, cy, ax, ay, fx, fy, px, py;
  };

  Size size_;
  Rgba8Frame card_;
  std::vector<Rgba8Frame> faces_;  // pre-scaled, opaque
  int face_count_;
  std::vector<Path> paths_;
};

/// PNG files of a directory in lexicographic order.
class DirSource final : public PacedSource {
 public:
  DirSource(std::filesystem::path dir, double fps, bool loop);

  std::string describe() const override { return "dir:" + dir_.string(); }
  std::size_t length() const noexcept { return files_.size(); }
  const std::vector<std::filesystem::path>& files() const noexcept { return files_; }

 protected:
  Rgba8Frame render(std::uint64_t index) override;

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

/// Never produces a frame and never ends.
class NullSource final : public FrameSource {
 public:
  void open(double) override { open_ = true; }
  ReadResult read(double) override { return {}; }
  void close() override { open_ = false; }
  bool is_open() const override { return open_; }
  std::string describe() const override { return "null"; }

 private:
  bool open_ = false;
};

/// Sorted *.png paths in `dir`. Throws IoError when the directory is missing.
std::vector<std::filesystem::path> list_png_files(const std::filesystem::path& dir);

/// Face patches bundled with the engine (may be empty).
std::vector<Rgba8Frame> load_face_patches(const std::filesystem::path& dir);

}  // namespace snowframe::runtime
