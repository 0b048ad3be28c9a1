#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace infoperc {

// SplitMix64 (Steele, Lea & Flood). Used both as the per-site stream
// generator and as the seed-splitting function: every derived seed is a
// pure function of its parent seed and integer labels, so replica and site
// streams never depend on the thread schedule.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label) noexcept {
  return SplitMix64::mix(SplitMix64::mix(parent ^ 0x243f6a8885a308d3ULL) + label * 0x9e3779b97f4a7c15ULL);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(parent, a), b);
}

// Labels that keep the streams of different consumers disjoint.
namespace stream {
inline constexpr std::uint64_t kSite = 1;
inline constexpr std::uint64_t kReplica = 2;
inline constexpr std::uint64_t kPerfectBlock = 3;
inline constexpr std::uint64_t kPerfectSample = 4;
inline constexpr std::uint64_t kPairedCopy = 5;
inline constexpr std::uint64_t kAuxiliary = 6;
}  // namespace stream

// Uniform double in [0, 1) from the top 53 bits.
template <class Engine>
double uniform01(Engine& engine) noexcept {
  return double(engine() >> 11) * 0x1.0p-53;
}

// Exponential(1) by inversion; strictly positive and finite.
template <class Engine>
double exponential1(Engine& engine) noexcept {
  return -std::log1p(-uniform01(engine));
}

}  // namespace infoperc
