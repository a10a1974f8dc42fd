#pragma once

#include <cstdint>
#include <vector>

#include "percmsm/lattice.hpp"
#include "percmsm/rng.hpp"

namespace percmsm {

// Method 1: Bernoulli thresholding of frozen uniforms.
// Method 2: exact seed/edge counts via frozen permutations.
enum class SamplingMethod { threshold = 1, exact_count = 2 };

int to_int(SamplingMethod method);
SamplingMethod sampling_method_from_int(int value);

// Frozen common-random-number pool for one estimation run.
//
// Substream keys are fixed at construction; every draw is a pure function of
// (key, counter), so replaying a stream yields bit-identical values no matter
// how many times or in which order the objective is evaluated.
class CrnPool {
 public:
  CrnPool(const Lattice& lattice, int n_colours, int n_replicates, SamplingMethod method,
          std::uint64_t master_seed);

  const Lattice& lattice() const { return *lattice_; }
  int colour_count() const { return n_colours_; }
  int replicate_count() const { return n_replicates_; }
  SamplingMethod method() const { return method_; }
  std::uint64_t master_seed() const { return master_seed_; }

  // Fresh stream positioned at draw 0; Method 1 consumes uniforms from it,
  // Method 2 feeds it to the permutation shuffle.
  rng::Stream seed_stream(int replicate, int colour) const;
  rng::Stream edge_stream(int replicate) const;

  // Digest over the frozen keys and the leading draws of every substream.
  std::uint64_t checksum() const;

 private:
  const Lattice* lattice_;
  int n_colours_;
  int n_replicates_;
  SamplingMethod method_;
  std::uint64_t master_seed_;
  std::vector<std::uint64_t> seed_keys_;  // replicate-major, n_replicates x n_colours
  std::vector<std::uint64_t> edge_keys_;  // n_replicates
};

}  // namespace percmsm
