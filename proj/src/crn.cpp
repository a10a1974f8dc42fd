#include "percmsm/crn.hpp"

#include <stdexcept>

namespace percmsm {

namespace {
constexpr std::uint64_t kSeedRole = 1;
constexpr std::uint64_t kEdgeRole = 2;
}  // namespace

int to_int(SamplingMethod method) { return static_cast<int>(method); }

SamplingMethod sampling_method_from_int(int value) {
  if (value == 1) {
    return SamplingMethod::threshold;
  }
  if (value == 2) {
    return SamplingMethod::exact_count;
  }
  throw std::invalid_argument("sampling method must be 1 or 2");
}

CrnPool::CrnPool(const Lattice& lattice, int n_colours, int n_replicates, SamplingMethod method,
                 std::uint64_t master_seed)
    : lattice_(&lattice),
      n_colours_(n_colours),
      n_replicates_(n_replicates),
      method_(method),
      master_seed_(master_seed) {
  if (n_colours < 1 || n_replicates < 1) {
    throw std::invalid_argument("CrnPool needs at least one colour and one replicate");
  }
  const auto m = static_cast<std::uint64_t>(to_int(method));
  seed_keys_.reserve(static_cast<std::size_t>(n_replicates) * n_colours);
  edge_keys_.reserve(n_replicates);
  for (int s = 0; s < n_replicates; ++s) {
    for (int l = 0; l < n_colours; ++l) {
      seed_keys_.push_back(rng::derive_key({master_seed, m, kSeedRole,
                                            static_cast<std::uint64_t>(s),
                                            static_cast<std::uint64_t>(l)}));
    }
    edge_keys_.push_back(
        rng::derive_key({master_seed, m, kEdgeRole, static_cast<std::uint64_t>(s), 0}));
  }
}

rng::Stream CrnPool::seed_stream(int replicate, int colour) const {
  if (replicate < 0 || replicate >= n_replicates_ || colour < 0 || colour >= n_colours_) {
    throw std::invalid_argument("replicate or colour index out of range");
  }
  return rng::Stream(seed_keys_[static_cast<std::size_t>(replicate) * n_colours_ + colour]);
}

rng::Stream CrnPool::edge_stream(int replicate) const {
  if (replicate < 0 || replicate >= n_replicates_) {
    throw std::invalid_argument("replicate index out of range");
  }
  return rng::Stream(edge_keys_[static_cast<std::size_t>(replicate)]);
}

std::uint64_t CrnPool::checksum() const {
  std::uint64_t h = rng::derive_key({master_seed_, static_cast<std::uint64_t>(to_int(method_)),
                                     static_cast<std::uint64_t>(n_replicates_),
                                     static_cast<std::uint64_t>(n_colours_),
                                     static_cast<std::uint64_t>(lattice_->vertex_count())});
  for (std::uint64_t key : seed_keys_) {
    h = rng::mix64(h ^ key ^ rng::Stream(key).next_u64());
  }
  for (std::uint64_t key : edge_keys_) {
    h = rng::mix64(h ^ key ^ rng::Stream(key).next_u64());
  }
  return h;
}

}  // namespace percmsm
