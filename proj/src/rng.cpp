#include "lungkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace lungkit {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() noexcept {
  ++counter_;
  return mix(seed_ + counter_ * kGamma);
}

std::uint64_t CounterRng::uniform_below(std::uint64_t n) noexcept {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % n;
  }
}

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
  const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + uniform_below(span));
}

double CounterRng::uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11) * kTwoPowMinus53;
}

double CounterRng::uniform_open01() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kTwoPowMinus53;
}

double CounterRng::standard_normal() noexcept {
  const double u1 = uniform_open01();
  const double u2 = uniform_open01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lungkit
