#include "percmsm/percolation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace percmsm {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), Vertex{0});
  }

  Vertex find(Vertex p) {
    Vertex root = p;
    while (root != parent_[root]) {
      root = parent_[root];
    }
    while (p != root) {
      const Vertex next = parent_[p];
      parent_[p] = root;
      p = next;
    }
    return root;
  }

  void merge(Vertex x, Vertex y) {
    const Vertex i = find(x);
    const Vertex j = find(y);
    if (i == j) {
      return;
    }
    if (size_[i] < size_[j]) {
      parent_[i] = j;
      size_[j] += size_[i];
    } else {
      parent_[j] = i;
      size_[i] += size_[j];
    }
  }

 private:
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> size_;
};

void require_same_lattice(const Lattice* a, const Lattice* b) {
  if (a == nullptr || b == nullptr || a != b) {
    throw std::invalid_argument("fields must share one lattice");
  }
}

void check_colour_count(int n_colours) {
  if (n_colours < 1 || n_colours > kMaxColours) {
    throw std::invalid_argument("colour count out of range");
  }
}

SeedField draw_seeds(const Lattice& lattice, const ParameterVector& theta, const CrnPool& pool,
                     int replicate) {
  const auto n_vertices = static_cast<std::size_t>(lattice.vertex_count());
  const int n_colours = theta.colour_count();
  SeedField seeds{&lattice, n_colours, std::vector<ColourMask>(n_vertices, 0)};
  for (int l = 0; l < n_colours; ++l) {
    const ColourMask bit = ColourMask{1} << l;
    rng::Stream stream = pool.seed_stream(replicate, l);
    if (pool.method() == SamplingMethod::threshold) {
      const double lambda = theta.lambdas[l];
      for (std::size_t i = 0; i < n_vertices; ++i) {
        if (stream.next_unit() < lambda) {
          seeds.masks[i] |= bit;
        }
      }
    } else {
      const auto order = rng::random_permutation(stream, static_cast<std::uint32_t>(n_vertices));
      const auto k = static_cast<std::size_t>(
          round_half_up(theta.lambdas[l] * static_cast<double>(n_vertices)));
      for (std::size_t idx = 0; idx < k; ++idx) {
        seeds.masks[order[idx]] |= bit;
      }
    }
  }
  return seeds;
}

EdgeField draw_edges(const Lattice& lattice, double mu, const CrnPool& pool, int replicate) {
  const auto n_pairs = static_cast<std::size_t>(lattice.edge_count());
  EdgeField edges{&lattice, std::vector<std::uint8_t>(n_pairs, 0)};
  rng::Stream stream = pool.edge_stream(replicate);
  if (pool.method() == SamplingMethod::threshold) {
    for (std::size_t e = 0; e < n_pairs; ++e) {
      edges.open[e] = stream.next_unit() < mu ? 1 : 0;
    }
  } else {
    const auto order = rng::random_permutation(stream, static_cast<std::uint32_t>(n_pairs));
    const auto k = static_cast<std::size_t>(round_half_up(mu * static_cast<double>(n_pairs)));
    for (std::size_t idx = 0; idx < k; ++idx) {
      edges.open[order[idx]] = 1;
    }
  }
  return edges;
}

DirectedEdgeField draw_directed_edges(const Lattice& lattice, double mu, const CrnPool& pool,
                                      int replicate) {
  const auto n_pairs = static_cast<std::size_t>(lattice.edge_count());
  DirectedEdgeField edges{&lattice, std::vector<std::uint8_t>(n_pairs, 0),
                          std::vector<std::uint8_t>(n_pairs, 0)};
  rng::Stream stream = pool.edge_stream(replicate);
  if (pool.method() == SamplingMethod::threshold) {
    for (std::size_t e = 0; e < n_pairs; ++e) {
      edges.toward_high[e] = stream.next_unit() < mu ? 1 : 0;
      edges.toward_low[e] = stream.next_unit() < mu ? 1 : 0;
    }
  } else {
    const auto k = static_cast<std::size_t>(round_half_up(mu * static_cast<double>(n_pairs)));
    const auto order_high = rng::random_permutation(stream, static_cast<std::uint32_t>(n_pairs));
    const auto order_low = rng::random_permutation(stream, static_cast<std::uint32_t>(n_pairs));
    for (std::size_t idx = 0; idx < k; ++idx) {
      edges.toward_high[order_high[idx]] = 1;
      edges.toward_low[order_low[idx]] = 1;
    }
  }
  return edges;
}

}  // namespace

ParameterVector make_parameters(std::initializer_list<double> lambdas, double mu) {
  ParameterVector theta;
  theta.lambdas.resize(static_cast<Eigen::Index>(lambdas.size()));
  Eigen::Index i = 0;
  for (double l : lambdas) {
    theta.lambdas[i++] = l;
  }
  theta.mu = mu;
  return theta;
}

void validate_probabilities(const ParameterVector& theta) {
  check_colour_count(theta.colour_count());
  for (int l = 0; l < theta.colour_count(); ++l) {
    if (!(theta.lambdas[l] >= 0.0 && theta.lambdas[l] <= 1.0)) {
      throw std::invalid_argument("seeding probability outside [0,1]");
    }
  }
  if (!(theta.mu >= 0.0 && theta.mu <= 1.0)) {
    throw std::invalid_argument("edge probability outside [0,1]");
  }
}

std::string to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::percolation:
      return "percolation";
    case ModelVariant::confined_undirected:
      return "confined";
    case ModelVariant::confined_directed:
      return "confined-directed";
  }
  throw std::invalid_argument("unknown model variant");
}

ModelVariant model_variant_from_string(const std::string& name) {
  if (name == "percolation") {
    return ModelVariant::percolation;
  }
  if (name == "confined") {
    return ModelVariant::confined_undirected;
  }
  if (name == "confined-directed") {
    return ModelVariant::confined_directed;
  }
  throw std::invalid_argument("unknown model variant: " + name);
}

std::int64_t round_half_up(double x) {
  if (x >= 0.0) {
    return static_cast<std::int64_t>(std::floor(x + 0.5));
  }
  return static_cast<std::int64_t>(std::ceil(x - 0.5));
}

SeedField seed_from_uniforms(const Lattice& lattice, const ParameterVector& theta,
                             const Eigen::MatrixXd& uniforms) {
  validate_probabilities(theta);
  const auto n_vertices = lattice.vertex_count();
  const int n_colours = theta.colour_count();
  if (uniforms.rows() != n_colours || uniforms.cols() != n_vertices) {
    throw std::invalid_argument("uniform draws must be dimensioned (n_colours, n_vertices)");
  }
  SeedField seeds{&lattice, n_colours, std::vector<ColourMask>(static_cast<std::size_t>(n_vertices), 0)};
  for (int l = 0; l < n_colours; ++l) {
    const ColourMask bit = ColourMask{1} << l;
    const double lambda = theta.lambdas[l];
    for (std::int64_t i = 0; i < n_vertices; ++i) {
      if (uniforms(l, i) < lambda) {
        seeds.masks[static_cast<std::size_t>(i)] |= bit;
      }
    }
  }
  return seeds;
}

namespace {

void check_permutation(const std::vector<std::uint32_t>& ranks, std::size_t n) {
  if (ranks.size() != n) {
    throw std::invalid_argument("permutation has wrong length");
  }
  std::vector<std::uint8_t> seen(n, 0);
  for (std::uint32_t r : ranks) {
    if (r >= n || seen[r]) {
      throw std::invalid_argument("ranks are not a permutation");
    }
    seen[r] = 1;
  }
}

}  // namespace

SeedField seed_fixed_count(const Lattice& lattice, const ParameterVector& theta,
                           std::span<const std::vector<std::uint32_t>> ranks) {
  validate_probabilities(theta);
  const auto n_vertices = static_cast<std::size_t>(lattice.vertex_count());
  const int n_colours = theta.colour_count();
  if (static_cast<int>(ranks.size()) != n_colours) {
    throw std::invalid_argument("one permutation per colour required");
  }
  SeedField seeds{&lattice, n_colours, std::vector<ColourMask>(n_vertices, 0)};
  for (int l = 0; l < n_colours; ++l) {
    check_permutation(ranks[l], n_vertices);
    const ColourMask bit = ColourMask{1} << l;
    const auto k =
        static_cast<std::uint32_t>(round_half_up(theta.lambdas[l] * static_cast<double>(n_vertices)));
    for (std::size_t i = 0; i < n_vertices; ++i) {
      if (ranks[l][i] < k) {
        seeds.masks[i] |= bit;
      }
    }
  }
  return seeds;
}

EdgeField edges_from_uniforms(const Lattice& lattice, double mu, const Eigen::VectorXd& uniforms) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("edge probability outside [0,1]");
  }
  const auto n_pairs = lattice.edge_count();
  if (uniforms.size() != n_pairs) {
    throw std::invalid_argument("one uniform draw per lattice edge required");
  }
  EdgeField edges{&lattice, std::vector<std::uint8_t>(static_cast<std::size_t>(n_pairs), 0)};
  for (std::int64_t e = 0; e < n_pairs; ++e) {
    edges.open[static_cast<std::size_t>(e)] = uniforms[e] < mu ? 1 : 0;
  }
  return edges;
}

EdgeField edges_fixed_count(const Lattice& lattice, double mu,
                            const std::vector<std::uint32_t>& ranks) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("edge probability outside [0,1]");
  }
  const auto n_pairs = static_cast<std::size_t>(lattice.edge_count());
  check_permutation(ranks, n_pairs);
  EdgeField edges{&lattice, std::vector<std::uint8_t>(n_pairs, 0)};
  const auto k = static_cast<std::uint32_t>(round_half_up(mu * static_cast<double>(n_pairs)));
  for (std::size_t e = 0; e < n_pairs; ++e) {
    if (ranks[e] < k) {
      edges.open[e] = 1;
    }
  }
  return edges;
}

ColourField propagate(const SeedField& seeds, const EdgeField& edges) {
  require_same_lattice(seeds.lattice, edges.lattice);
  const Lattice& lattice = *seeds.lattice;
  const auto n_vertices = static_cast<std::size_t>(lattice.vertex_count());
  UnionFind components(n_vertices);
  const auto edge_list = lattice.edges();
  for (std::size_t e = 0; e < edges.open.size(); ++e) {
    if (edges.open[e]) {
      components.merge(edge_list[e].a, edge_list[e].b);
    }
  }
  std::vector<ColourMask> root_mask(n_vertices, 0);
  for (std::size_t i = 0; i < n_vertices; ++i) {
    root_mask[components.find(static_cast<Vertex>(i))] |= seeds.masks[i];
  }
  ColourField out{&lattice, seeds.n_colours, std::vector<ColourMask>(n_vertices, 0)};
  for (std::size_t i = 0; i < n_vertices; ++i) {
    out.masks[i] = root_mask[components.find(static_cast<Vertex>(i))];
  }
  return out;
}

ColourField propagate_confined(const SeedField& seeds, const EdgeField& edges,
                               ModelVariant variant) {
  if (variant != ModelVariant::confined_undirected) {
    throw std::invalid_argument("undirected edge field requires the confined undirected variant");
  }
  require_same_lattice(seeds.lattice, edges.lattice);
  const auto edge_list = seeds.lattice->edges();
  ColourField out{seeds.lattice, seeds.n_colours, seeds.masks};
  for (std::size_t e = 0; e < edges.open.size(); ++e) {
    if (edges.open[e]) {
      out.masks[edge_list[e].a] |= seeds.masks[edge_list[e].b];
      out.masks[edge_list[e].b] |= seeds.masks[edge_list[e].a];
    }
  }
  return out;
}

ColourField propagate_confined(const SeedField& seeds, const DirectedEdgeField& edges,
                               ModelVariant variant) {
  if (variant != ModelVariant::confined_directed) {
    throw std::invalid_argument("directed edge field requires the confined directed variant");
  }
  require_same_lattice(seeds.lattice, edges.lattice);
  const auto edge_list = seeds.lattice->edges();
  ColourField out{seeds.lattice, seeds.n_colours, seeds.masks};
  for (std::size_t e = 0; e < edge_list.size(); ++e) {
    if (edges.toward_high[e]) {
      out.masks[edge_list[e].b] |= seeds.masks[edge_list[e].a];
    }
    if (edges.toward_low[e]) {
      out.masks[edge_list[e].a] |= seeds.masks[edge_list[e].b];
    }
  }
  return out;
}

ColourField simulate(const Lattice& lattice, const ParameterVector& theta, const CrnPool& pool,
                     int replicate, ModelVariant variant) {
  validate_probabilities(theta);
  if (&lattice != &pool.lattice()) {
    throw std::invalid_argument("pool was built for a different lattice");
  }
  if (theta.colour_count() != pool.colour_count()) {
    throw std::invalid_argument("parameter colour count differs from pool");
  }
  const SeedField seeds = draw_seeds(lattice, theta, pool, replicate);
  switch (variant) {
    case ModelVariant::percolation:
      return propagate(seeds, draw_edges(lattice, theta.mu, pool, replicate));
    case ModelVariant::confined_undirected:
      return propagate_confined(seeds, draw_edges(lattice, theta.mu, pool, replicate), variant);
    case ModelVariant::confined_directed:
      return propagate_confined(seeds, draw_directed_edges(lattice, theta.mu, pool, replicate),
                                variant);
  }
  throw std::invalid_argument("unknown model variant");
}

std::int64_t count_contaminated_vertices(const EdgeField& edges) {
  if (edges.lattice == nullptr) {
    throw std::invalid_argument("edge field has no lattice");
  }
  // A vertex lies in an open component of size >= 2 exactly when some open
  // edge is incident to it.
  const auto edge_list = edges.lattice->edges();
  std::vector<std::uint8_t> touched(static_cast<std::size_t>(edges.lattice->vertex_count()), 0);
  for (std::size_t e = 0; e < edges.open.size(); ++e) {
    if (edges.open[e]) {
      touched[edge_list[e].a] = 1;
      touched[edge_list[e].b] = 1;
    }
  }
  std::int64_t count = 0;
  for (std::uint8_t t : touched) {
    count += t;
  }
  return count;
}

GeneratedDataset generate_synthetic_dataset(const Lattice& lattice, const ParameterVector& theta,
                                            std::uint64_t seed, ModelVariant variant) {
  validate_probabilities(theta);
  const CrnPool pool(lattice, theta.colour_count(), 1, SamplingMethod::threshold, seed);
  const SeedField seeds = draw_seeds(lattice, theta, pool, 0);
  GeneratedDataset out;
  out.seed = seed;
  const auto n_vertices = static_cast<double>(lattice.vertex_count());
  const int n_colours = theta.colour_count();

  if (variant == ModelVariant::confined_directed) {
    const DirectedEdgeField edges = draw_directed_edges(lattice, theta.mu, pool, 0);
    out.field = propagate_confined(seeds, edges, variant);
    std::int64_t open = 0;
    for (std::size_t e = 0; e < edges.toward_high.size(); ++e) {
      open += edges.toward_high[e] + edges.toward_low[e];
    }
    out.open_edge_frequency = static_cast<double>(open) / (2.0 * static_cast<double>(lattice.edge_count()));
  } else {
    const EdgeField edges = draw_edges(lattice, theta.mu, pool, 0);
    out.field = variant == ModelVariant::percolation
                    ? propagate(seeds, edges)
                    : propagate_confined(seeds, edges, variant);
    std::int64_t open = 0;
    for (std::uint8_t o : edges.open) {
      open += o;
    }
    out.open_edge_frequency = static_cast<double>(open) / static_cast<double>(lattice.edge_count());
  }

  out.seed_frequency.setZero(n_colours);
  out.observed_frequency.setZero(n_colours);
  for (std::size_t i = 0; i < seeds.masks.size(); ++i) {
    for (int l = 0; l < n_colours; ++l) {
      const ColourMask bit = ColourMask{1} << l;
      if (seeds.masks[i] & bit) {
        out.seed_frequency[l] += 1.0;
      }
      if (out.field.masks[i] & bit) {
        out.observed_frequency[l] += 1.0;
      }
    }
  }
  out.seed_frequency /= n_vertices;
  out.observed_frequency /= n_vertices;
  return out;
}

}  // namespace percmsm
