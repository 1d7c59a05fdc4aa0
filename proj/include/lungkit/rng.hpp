#pragma once

#include <cstdint>

namespace lungkit {

/// Counter-based generator "lungkit-splitmix64/v1".
///
/// The i-th output (i = 0, 1, ...) for seed s is
///     mix(s + (i + 1) * 0x9E3779B97F4A7C15)   (mod 2^64)
/// where mix is the SplitMix64 finaliser:
///     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     z =  z ^ (z >> 31)
/// Derived draws are defined below so another implementation can reproduce
/// every stream exactly; nothing here depends on <random> distributions,
/// whose outputs differ between standard libraries.
class CounterRng {
 public:
  static constexpr const char* kName = "lungkit-splitmix64/v1";

  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, n). Rejection: draw x until x >= (2^64 - n) mod n,
  /// return x mod n. Requires n > 0.
  std::uint64_t uniform_below(std::uint64_t n) noexcept;

  /// Uniform integer on the closed range [lo, hi]; requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;

  /// (next_u64() >> 11) * 2^-53, on [0, 1).
  double uniform01() noexcept;

  /// ((next_u64() >> 11) + 0.5) * 2^-53, on the open interval (0, 1).
  double uniform_open01() noexcept;

  /// Box-Muller using two uniform_open01 draws u1, u2:
  /// sqrt(-2 ln u1) * cos(2 pi u2). The sine branch is discarded.
  double standard_normal() noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace lungkit
