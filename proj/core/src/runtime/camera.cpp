#include "snowframe/runtime/camera.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <vector>

#include "snowframe/errors.hpp"

#if defined(__linux__) && __has_include(<linux/videodev2.h>)
#define SNOWFRAME_HAVE_V4L2 1
#include <fcntl.h>
#include <linux/videodev2.h>
#include <sys/ioctl.h>
#include <sys/mman.h>
#include <sys/select.h>
#include <unistd.h>
#endif

namespace snowframe::runtime {

namespace {

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

}  // namespace

Rgba8Frame yuyv_to_rgba(const std::uint8_t* data, int width, int height, std::size_t stride) {
  Rgba8Frame out(width, height, true);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* src = data + static_cast<std::size_t>(y) * stride;
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < width; ++x) {
      const int yy = src[2 * x] - 16;
      const int u = src[4 * (x / 2) + 1] - 128;
      const int v = src[4 * (x / 2) + 3] - 128;
      const int c = 298 * yy + 128;
      dst[4 * x + 0] = clamp8((c + 409 * v) >> 8);
      dst[4 * x + 1] = clamp8((c - 100 * u - 208 * v) >> 8);
      dst[4 * x + 2] = clamp8((c + 516 * u) >> 8);
      dst[4 * x + 3] = 255;
    }
  }
  return out;
}

#ifdef SNOWFRAME_HAVE_V4L2

namespace {

int xioctl(int fd, unsigned long request, void* arg) {
  int r;
  do {
    r = ioctl(fd, request, arg);
  } while (r == -1 && errno == EINTR);
  return r;
}

class V4l2Source final : public FrameSource {
 public:
  V4l2Source(std::string device, Size size, double fps) : device_(std::move(device)), size_(size), fps_(fps) {}
  ~V4l2Source() override { close(); }

  void open(double now) override {
    close();
    fd_ = ::open(device_.c_str(), O_RDWR | O_NONBLOCK);
    if (fd_ < 0) fail("cannot open");
    v4l2_format fmt{};
    fmt.type = V4L2_BUF_TYPE_VIDEO_CAPTURE;
    fmt.fmt.pix.width = static_cast<__u32>(size_.width);
    fmt.fmt.pix.height = static_cast<__u32>(size_.height);
    fmt.fmt.pix.pixelformat = V4L2_PIX_FMT_YUYV;
    fmt.fmt.pix.field = V4L2_FIELD_NONE;
    if (xioctl(fd_, VIDIOC_S_FMT, &fmt) < 0) fail("cannot set format on");
    if (fmt.fmt.pix.pixelformat != V4L2_PIX_FMT_YUYV) fail("no YUYV support on");
    width_ = static_cast<int>(fmt.fmt.pix.width);
    height_ = static_cast<int>(fmt.fmt.pix.height);
    stride_ = fmt.fmt.pix.bytesperline;

    v4l2_streamparm parm{};
    parm.type = V4L2_BUF_TYPE_VIDEO_CAPTURE;
    parm.parm.capture.timeperframe.numerator = 1000;
    parm.parm.capture.timeperframe.denominator = static_cast<__u32>(fps_ * 1000.0);
    xioctl(fd_, VIDIOC_S_PARM, &parm);  // best effort

    v4l2_requestbuffers req{};
    req.count = 4;
    req.type = V4L2_BUF_TYPE_VIDEO_CAPTURE;
    req.memory = V4L2_MEMORY_MMAP;
    if (xioctl(fd_, VIDIOC_REQBUFS, &req) < 0 || req.count < 2) fail("cannot allocate buffers for");
    for (__u32 i = 0; i < req.count; ++i) {
      v4l2_buffer buf{};
      buf.type = V4L2_BUF_TYPE_VIDEO_CAPTURE;
      buf.memory = V4L2_MEMORY_MMAP;
      buf.index = i;
      if (xioctl(fd_, VIDIOC_QUERYBUF, &buf) < 0) fail("cannot query buffer of");
      void* p = mmap(nullptr, buf.length, PROT_READ | PROT_WRITE, MAP_SHARED, fd_, buf.m.offset);
      if (p == MAP_FAILED) fail("cannot map buffer of");
      buffers_.push_back({p, buf.length});
      if (xioctl(fd_, VIDIOC_QBUF, &buf) < 0) fail("cannot queue buffer of");
    }
    v4l2_buf_type type = V4L2_BUF_TYPE_VIDEO_CAPTURE;
    if (xioctl(fd_, VIDIOC_STREAMON, &type) < 0) fail("cannot start streaming on");
    index_ = 0;
    (void)now;
  }

  ReadResult read(double now) override {
    if (fd_ < 0) throw IoError("read from a closed camera");
    ReadResult result;
    fd_set fds;
    FD_ZERO(&fds);
    FD_SET(fd_, &fds);
    timeval tv{0, static_cast<suseconds_t>(1e6 / fps_)};
    const int r = select(fd_ + 1, &fds, nullptr, nullptr, &tv);
    if (r < 0 && errno != EINTR) fail("select failed on");
    if (r <= 0) return result;

    // Drain every ready buffer and keep only the newest.
    std::optional<v4l2_buffer> newest;
    for (;;) {
      v4l2_buffer buf{};
      buf.type = V4L2_BUF_TYPE_VIDEO_CAPTURE;
      buf.memory = V4L2_MEMORY_MMAP;
      if (xioctl(fd_, VIDIOC_DQBUF, &buf) < 0) {
        if (errno == EAGAIN) break;
        fail("cannot dequeue from");
      }
      if (newest) {
        ++result.dropped;
        xioctl(fd_, VIDIOC_QBUF, &*newest);
      }
      newest = buf;
    }
    if (!newest) return result;
    const auto* data = static_cast<const std::uint8_t*>(buffers_[newest->index].first);
    auto frame = std::make_shared<const Rgba8Frame>(yuyv_to_rgba(data, width_, height_, stride_));
    xioctl(fd_, VIDIOC_QBUF, &*newest);
    index_ += result.dropped;
    result.frame = CapturedFrame{std::move(frame), now, index_++};
    return result;
  }

  void close() override {
    if (fd_ < 0) return;
    v4l2_buf_type type = V4L2_BUF_TYPE_VIDEO_CAPTURE;
    xioctl(fd_, VIDIOC_STREAMOFF, &type);
    for (auto& [p, len] : buffers_) munmap(p, len);
    buffers_.clear();
    ::close(fd_);
    fd_ = -1;
  }

  bool is_open() const override { return fd_ >= 0; }
  std::string describe() const override { return "camera:" + device_; }
  bool self_paced() const override { return true; }

 private:
  [[noreturn]] void fail(const char* what) {
    const std::string msg = std::string(what) + " " + device_ + ": " + std::strerror(errno);
    close();
    throw IoError(msg);
  }

  std::string device_;
  Size size_;
  double fps_;
  int fd_ = -1;
  int width_ = 0;
  int height_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::pair<void*, std::size_t>> buffers_;
  std::uint64_t index_ = 0;
};

}  // namespace

bool camera_supported() noexcept { return true; }

std::unique_ptr<FrameSource> make_camera_source(std::string device, Size size, double fps) {
  return std::make_unique<V4l2Source>(std::move(device), size, fps);
}

#else

bool camera_supported() noexcept { return false; }

std::unique_ptr<FrameSource> make_camera_source(std::string device, Size, double) {
  throw IoError("camera capture is not supported on this platform (" + device + ")");
}

#endif

}  // namespace snowframe::runtime
