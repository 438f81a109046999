#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include "snowframe/image.hpp"

namespace snowframe::runtime {

/// Consumer of composed output frames. write() throws IoError on failure.
class FrameSink {
 public:
  virtual ~FrameSink() = default;
  virtual void open() {}
  virtual void write(const Rgba8Frame& frame, std::uint64_t index) = 0;
  virtual void flush() {}
  virtual void close() {}
  virtual std::string describe() const = 0;
  /// Polled by the engine; a window sink sets it when the user closes it.
  virtual bool close_requested() const { return false; }
};

/// Acknowledges every frame and keeps nothing but a count.
class NullSink final : public FrameSink {
 public:
  void write(const Rgba8Frame&, std::uint64_t) override { ++frames_; }
  std::string describe() const override { return "null"; }
  std::uint64_t frames() const noexcept { return frames_; }

 private:
  std::uint64_t frames_ = 0;
};

/// Numbered PNG files: frame_000000.png, frame_000001.png, ...
class DirSink final : public FrameSink {
 public:
  explicit DirSink(std::filesystem::path dir);
  void open() override;
  void write(const Rgba8Frame& frame, std::uint64_t index) override;
  std::string describe() const override { return "dir:" + dir_.string(); }
  std::uint64_t frames() const noexcept { return frames_; }

  static std::string file_name(std::uint64_t index);

 private:
  std::filesystem::path dir_;
  std::uint64_t frames_ = 0;
};

/// Forwards frames to a callback (tests, embedding).
class CallbackSink final : public FrameSink {
 public:
  using Callback = std::function<void(const Rgba8Frame&, std::uint64_t)>;
  explicit CallbackSink(Callback cb) : cb_(std::move(cb)) {}
  void write(const Rgba8Frame& frame, std::uint64_t index) override { cb_(frame, index); }
  std::string describe() const override { return "callback"; }

 private:
  Callback cb_;
};

bool window_supported() noexcept;

/// On-screen window (X11). open() throws IoError without a display.
std::unique_ptr<FrameSink> make_window_sink(int width, int height, bool fullscreen, std::string title);

}  // namespace snowframe::runtime
