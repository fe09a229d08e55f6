#include "ssr/rng.hpp"

namespace ssr {

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t key : path) {
    h = mix64(h + 0x9e3779b97f4a7c15ULL + mix64(key));
  }
  return h;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t basis) noexcept {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a(std::string_view text) noexcept { return fnv1a(text.data(), text.size()); }

}  // namespace ssr
