#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace ssr {

/// SplitMix64 output function; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a path of integer keys.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

/// 64-bit FNV-1a over raw bytes; used for content digests and string tags.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;
std::uint64_t fnv1a(std::string_view text) noexcept;

/// Counter-based stream: the k-th output is mix64(key + k * golden).
/// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
class StreamEngine {
 public:
  using result_type = std::uint64_t;

  explicit StreamEngine(std::uint64_t key) noexcept : counter_(mix64(key)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix64(counter_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t counter_;
};

}  // namespace ssr
