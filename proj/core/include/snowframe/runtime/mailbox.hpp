#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>

namespace snowframe::runtime {

/// Single-slot queue. put() overwrites an unconsumed value and counts it as
/// dropped, so a reader always gets the newest value.
template <typename T>
class LatestMailbox {
 public:
  void put(T value) {
    {
      std::lock_guard lock(mu_);
      if (slot_) ++dropped_;
      slot_ = std::move(value);
      ++puts_;
    }
    cv_.notify_all();
  }

  std::optional<T> try_take() {
    std::lock_guard lock(mu_);
    return take_locked();
  }

  /// Waits up to `timeout` for a value; empty on timeout or close.
  template <typename Rep, typename Period>
  std::optional<T> take_for(std::chrono::duration<Rep, Period> timeout) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return slot_.has_value() || closed_; });
    return take_locked();
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  void reopen() {
    std::lock_guard lock(mu_);
    closed_ = false;
    slot_.reset();
  }

  bool closed() const {
    std::lock_guard lock(mu_);
    return closed_;
  }
  std::uint64_t dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
  }
  std::uint64_t puts() const {
    std::lock_guard lock(mu_);
    return puts_;
  }

 private:
  std::optional<T> take_locked() {
    std::optional<T> out;
    out.swap(slot_);
    return out;
  }

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::optional<T> slot_;
  bool closed_ = false;
  std::uint64_t dropped_ = 0;
  std::uint64_t puts_ = 0;
};

}  // namespace snowframe::runtime
