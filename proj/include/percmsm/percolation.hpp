#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "percmsm/crn.hpp"
#include "percmsm/lattice.hpp"

namespace percmsm {

// Per-vertex colour bitmask; bit l-1 carries colour l.
using ColourMask = std::uint32_t;
inline constexpr int kMaxColours = 31;

// theta = (lambda^1..lambda^{n_c}, mu).
struct ParameterVector {
  Eigen::VectorXd lambdas;
  double mu = 0.0;

  int colour_count() const { return static_cast<int>(lambdas.size()); }
};

ParameterVector make_parameters(std::initializer_list<double> lambdas, double mu);

// All entries must be probabilities in [0,1].
void validate_probabilities(const ParameterVector& theta);

struct SeedField {
  const Lattice* lattice = nullptr;
  int n_colours = 0;
  std::vector<ColourMask> masks;
};

// Observed field after contamination; masks are vertexwise supersets of the
// seeding they came from. Does not outlive its lattice.
struct ColourField {
  const Lattice* lattice = nullptr;
  int n_colours = 0;
  std::vector<ColourMask> masks;
};

struct EdgeField {
  const Lattice* lattice = nullptr;
  std::vector<std::uint8_t> open;  // aligned with Lattice::edges()
};

// Two independent, oppositely oriented states per adjacent pair; for edge
// (a,b) with a < b, toward_high carries a->b and toward_low carries b->a.
struct DirectedEdgeField {
  const Lattice* lattice = nullptr;
  std::vector<std::uint8_t> toward_high;
  std::vector<std::uint8_t> toward_low;
};

enum class ModelVariant {
  percolation,          // colours fill whole open components
  confined_undirected,  // one undirected hop, no chaining
  confined_directed,    // one directed hop, no chaining
};

std::string to_string(ModelVariant variant);
ModelVariant model_variant_from_string(const std::string& name);

// Round half away from zero (half-up for nonnegative inputs).
std::int64_t round_half_up(double x);

// Method 1 seeding: bit l of vertex i set iff uniforms(l, i) < lambda^l.
SeedField seed_from_uniforms(const Lattice& lattice, const ParameterVector& theta,
                             const Eigen::MatrixXd& uniforms);

// Method 2 seeding: exactly round_half_up(lambda^l * n_I) vertices per colour;
// ranks[l][i] is the rank of vertex i under the colour-l permutation and the
// lowest ranks are seeded.
SeedField seed_fixed_count(const Lattice& lattice, const ParameterVector& theta,
                           std::span<const std::vector<std::uint32_t>> ranks);

EdgeField edges_from_uniforms(const Lattice& lattice, double mu, const Eigen::VectorXd& uniforms);
EdgeField edges_fixed_count(const Lattice& lattice, double mu,
                            const std::vector<std::uint32_t>& ranks);

// Colours every open component with the union of its seed masks
// (union-find over open edges, then one mask-union pass per root).
ColourField propagate(const SeedField& seeds, const EdgeField& edges);

// Contamination crosses exactly one edge: vertex i picks up the seeds of
// neighbours j whose edge toward i is open. No second-neighbour effects.
ColourField propagate_confined(const SeedField& seeds, const EdgeField& edges,
                               ModelVariant variant);
ColourField propagate_confined(const SeedField& seeds, const DirectedEdgeField& edges,
                               ModelVariant variant);

// Seeding + edge draw + propagation for one pool replicate; deterministic in
// (theta, pool keys, replicate).
ColourField simulate(const Lattice& lattice, const ParameterVector& theta, const CrnPool& pool,
                     int replicate, ModelVariant variant = ModelVariant::percolation);

// Number of vertices lying in open components of size >= 2.
std::int64_t count_contaminated_vertices(const EdgeField& edges);

// One synthetic dataset drawn with Method 1 plus the realised frequencies
// reported alongside it: seeding incidence, observed incidence, open-edge
// fraction.
struct GeneratedDataset {
  ColourField field;
  Eigen::VectorXd seed_frequency;
  Eigen::VectorXd observed_frequency;
  double open_edge_frequency = 0.0;
  std::uint64_t seed = 0;
};

GeneratedDataset generate_synthetic_dataset(const Lattice& lattice, const ParameterVector& theta,
                                            std::uint64_t seed,
                                            ModelVariant variant = ModelVariant::percolation);

}  // namespace percmsm
