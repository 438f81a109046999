#pragma once

#include <cstddef>
#include <deque>

namespace snowframe::runtime {

/// Events per second over a trailing window of engine time.
class RateMeter {
 public:
  explicit RateMeter(double window_s = 10.0) : window_(window_s) {}

  void record(double t) {
    events_.push_back(t);
    trim(t);
  }

  /// Count in (now - window, now] divided by the window, or by the elapsed
  /// span since `origin` when that is shorter.
  double rate(double now, double origin = 0.0) {
    trim(now);
    const double span = now - origin < window_ ? now - origin : window_;
    return span > 0.0 ? static_cast<double>(events_.size()) / span : 0.0;
  }

  std::size_t count_in_window(double now) {
    trim(now);
    return events_.size();
  }

  void clear() { events_.clear(); }
  double window() const noexcept { return window_; }

 private:
  void trim(double now) {
    while (!events_.empty() && events_.front() <= now - window_) events_.pop_front();
  }

  double window_;
  std::deque<double> events_;
};

}  // namespace snowframe::runtime
