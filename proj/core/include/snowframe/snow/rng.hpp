#pragma once

#include <array>
#include <cstdint>

namespace snowframe::snow {

/// splitmix64 step; used to expand a 64-bit seed into generator state.
std::uint64_t splitmix64(std::uint64_t& x) noexcept;

/// xoshiro256** 1.0 (Blackman and Vigna). State is seeded by four splitmix64
/// outputs; uniform() takes the top 53 bits of next().
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed = 0) noexcept;
  static Xoshiro256 from_state(const std::array<std::uint64_t, 4>& state) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform double in [0, 1).
  double uniform() noexcept;
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

  friend bool operator==(const Xoshiro256&, const Xoshiro256&) = default;

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace snowframe::snow
