#include "percmsm/rng.hpp"

#include <numeric>

namespace percmsm::rng {

std::uint64_t derive_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;  // pi fraction bits
  for (std::uint64_t w : words) {
    h = mix64(h ^ (w + kGolden + (h << 6) + (h >> 2)));
  }
  return h;
}

std::uint64_t Stream::next_below(std::uint64_t n) {
  auto wide = static_cast<unsigned __int128>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(wide);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      wide = static_cast<unsigned __int128>(next_u64()) * n;
      low = static_cast<std::uint64_t>(wide);
    }
  }
  return static_cast<std::uint64_t>(wide >> 64);
}

std::vector<std::uint32_t> random_permutation(Stream& stream, std::uint32_t n) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) {
    const auto j = static_cast<std::uint32_t>(stream.next_below(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace percmsm::rng
