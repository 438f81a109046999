#include <atomic>
#include <cstring>
#include <vector>

#include "snowframe/errors.hpp"
#include "snowframe/runtime/sink.hpp"

#ifdef SNOWFRAME_HAVE_X11
#include <X11/Xatom.h>
#include <X11/Xlib.h>
#include <X11/Xutil.h>
#endif

namespace snowframe::runtime {

#ifdef SNOWFRAME_HAVE_X11

namespace {

class X11Sink final : public FrameSink {
 public:
  X11Sink(int width, int height, bool fullscreen, std::string title)
      : width_(width), height_(height), fullscreen_(fullscreen), title_(std::move(title)) {}
  ~X11Sink() override { close(); }

  void open() override {
    if (display_) return;
    display_ = XOpenDisplay(nullptr);
    if (!display_) throw IoError("cannot open X display (is DISPLAY set?)");
    const int screen = DefaultScreen(display_);
    XVisualInfo info;
    if (!XMatchVisualInfo(display_, screen, 24, TrueColor, &info)) {
      close();
      throw IoError("X display has no 24-bit TrueColor visual");
    }
    visual_ = info.visual;
    window_ = XCreateSimpleWindow(display_, RootWindow(display_, screen), 0, 0,
                                  static_cast<unsigned>(width_), static_cast<unsigned>(height_), 0,
                                  BlackPixel(display_, screen), BlackPixel(display_, screen));
    XStoreName(display_, window_, title_.c_str());
    XSelectInput(display_, window_, KeyPressMask | StructureNotifyMask);
    wm_delete_ = XInternAtom(display_, "WM_DELETE_WINDOW", False);
    XSetWMProtocols(display_, window_, &wm_delete_, 1);
    if (fullscreen_) {
      Atom state = XInternAtom(display_, "_NET_WM_STATE", False);
      Atom fs = XInternAtom(display_, "_NET_WM_STATE_FULLSCREEN", False);
      XChangeProperty(display_, window_, state, XA_ATOM, 32, PropModeReplace,
                      reinterpret_cast<unsigned char*>(&fs), 1);
    }
    XMapWindow(display_, window_);
    gc_ = XCreateGC(display_, window_, 0, nullptr);
    pixels_.assign(static_cast<std::size_t>(width_) * height_ * 4, 0);
    image_ = XCreateImage(display_, visual_, 24, ZPixmap, 0, reinterpret_cast<char*>(pixels_.data()),
                          static_cast<unsigned>(width_), static_cast<unsigned>(height_), 32, 0);
    XFlush(display_);
  }

  void write(const Rgba8Frame& frame, std::uint64_t) override {
    if (!display_) throw IoError("window sink is not open");
    pump_events();
    const int w = std::min(width_, frame.width());
    const int h = std::min(height_, frame.height());
    for (int y = 0; y < h; ++y) {
      const std::uint8_t* src = frame.row(y);
      std::uint8_t* dst = pixels_.data() + static_cast<std::size_t>(y) * width_ * 4;
      for (int x = 0; x < w; ++x) {
        dst[4 * x + 0] = src[4 * x + 2];
        dst[4 * x + 1] = src[4 * x + 1];
        dst[4 * x + 2] = src[4 * x + 0];
        dst[4 * x + 3] = 0;
      }
    }
    XPutImage(display_, window_, gc_, image_, 0, 0, 0, 0, static_cast<unsigned>(w), static_cast<unsigned>(h));
    XFlush(display_);
  }

  void flush() override {
    if (display_) XSync(display_, False);
  }

  void close() override {
    if (!display_) return;
    if (image_) {
      image_->data = nullptr;  // owned by pixels_
      XDestroyImage(image_);
      image_ = nullptr;
    }
    if (gc_) XFreeGC(display_, gc_);
    gc_ = nullptr;
    if (window_) XDestroyWindow(display_, window_);
    window_ = 0;
    XCloseDisplay(display_);
    display_ = nullptr;
  }

  std::string describe() const override { return "window"; }
  bool close_requested() const override { return close_requested_.load(); }

 private:
  void pump_events() {
    while (XPending(display_) > 0) {
      XEvent ev;
      XNextEvent(display_, &ev);
      if (ev.type == ClientMessage && static_cast<Atom>(ev.xclient.data.l[0]) == wm_delete_) {
        close_requested_ = true;
      } else if (ev.type == KeyPress) {
        const KeySym sym = XLookupKeysym(&ev.xkey, 0);
        if (sym == XK_Escape || sym == XK_q) close_requested_ = true;
      }
    }
  }

  int width_;
  int height_;
  bool fullscreen_;
  std::string title_;
  Display* display_ = nullptr;
  Visual* visual_ = nullptr;
  Window window_ = 0;
  GC gc_ = nullptr;
  XImage* image_ = nullptr;
  Atom wm_delete_ = 0;
  std::vector<std::uint8_t> pixels_;
  std::atomic<bool> close_requested_{false};
};

}  // namespace

bool window_supported() noexcept { return true; }

std::unique_ptr<FrameSink> make_window_sink(int width, int height, bool fullscreen, std::string title) {
  return std::make_unique<X11Sink>(width, height, fullscreen, std::move(title));
}

#else

bool window_supported() noexcept { return false; }

std::unique_ptr<FrameSink> make_window_sink(int, int, bool, std::string) {
  throw IoError("this build has no window support");
}

#endif

}  // namespace snowframe::runtime
