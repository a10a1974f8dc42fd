#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace percmsm::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; full avalanche over 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Combines words into a substream key; order-sensitive.
std::uint64_t derive_key(std::initializer_list<std::uint64_t> words);

// Counter-based uniform generator: draw k is a pure function of (key, k), so
// a stream can be re-created at any time and replays identical values.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix64(key_ + ++counter_ * kGolden); }

  // Uniform on [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {0,...,n-1}, unbiased (multiply-shift with rejection).
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Uniform random permutation of {0,...,n-1} by Fisher-Yates.
std::vector<std::uint32_t> random_permutation(Stream& stream, std::uint32_t n);

}  // namespace percmsm::rng
