#include "oracles.hpp"

#include <array>
#include <map>
#include <queue>
#include <utility>

namespace oracles {

using percmsm::ColourField;
using percmsm::EdgeField;
using percmsm::Lattice;
using percmsm::SeedField;
using percmsm::Vertex;

ColourField bfs_propagate(const SeedField& seeds, const EdgeField& edges) {
  const Lattice& lattice = *seeds.lattice;
  const auto n = static_cast<std::size_t>(lattice.vertex_count());
  std::vector<std::vector<Vertex>> adjacency(n);
  const auto edge_list = lattice.edges();
  for (std::size_t e = 0; e < edge_list.size(); ++e) {
    if (edges.open[e]) {
      adjacency[edge_list[e].a].push_back(edge_list[e].b);
      adjacency[edge_list[e].b].push_back(edge_list[e].a);
    }
  }
  ColourField out{seeds.lattice, seeds.n_colours, std::vector<percmsm::ColourMask>(n, 0)};
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::uint8_t> visited(n, 0);
    std::queue<Vertex> queue;
    queue.push(static_cast<Vertex>(start));
    visited[start] = 1;
    percmsm::ColourMask mask = 0;
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop();
      mask |= seeds.masks[v];
      for (Vertex u : adjacency[v]) {
        if (!visited[u]) {
          visited[u] = 1;
          queue.push(u);
        }
      }
    }
    out.masks[start] = mask;
  }
  return out;
}

std::vector<int> bfs_components(const Lattice& lattice, const std::vector<std::uint8_t>& open) {
  const auto n = static_cast<std::size_t>(lattice.vertex_count());
  std::vector<std::vector<Vertex>> adjacency(n);
  const auto edge_list = lattice.edges();
  for (std::size_t e = 0; e < edge_list.size(); ++e) {
    if (open[e]) {
      adjacency[edge_list[e].a].push_back(edge_list[e].b);
      adjacency[edge_list[e].b].push_back(edge_list[e].a);
    }
  }
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (label[start] >= 0) {
      continue;
    }
    std::queue<Vertex> queue;
    queue.push(static_cast<Vertex>(start));
    label[start] = next;
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop();
      for (Vertex u : adjacency[v]) {
        if (label[u] < 0) {
          label[u] = next;
          queue.push(u);
        }
      }
    }
    ++next;
  }
  return label;
}

namespace {

using Coord = std::pair<int, int>;

constexpr std::array<Coord, 6> kTriOffsets = {
    {{-1, -1}, {-1, 0}, {0, -1}, {0, 1}, {1, 0}, {1, 1}}};

// Sum over all 0/1 assignments of (seed bits, edge bits) of
// P(assignment) * product of Y indicators. Bit probabilities are given per
// index; Y_v = seed_v or any(edge e toward v open and seed at the far end).
struct LocalModel {
  std::vector<double> seed_prob;             // per local vertex
  std::vector<std::pair<int, int>> edges;    // local vertex index pairs
  double edge_prob = 0.0;
};

double enumerate_pair_product(const LocalModel& model, const std::vector<int>& targets) {
  const int n_seeds = static_cast<int>(model.seed_prob.size());
  const int n_edges = static_cast<int>(model.edges.size());
  double total = 0.0;
  for (std::uint64_t seed_bits = 0; seed_bits < (1ull << n_seeds); ++seed_bits) {
    double seed_p = 1.0;
    for (int v = 0; v < n_seeds; ++v) {
      seed_p *= (seed_bits >> v) & 1u ? model.seed_prob[v] : 1.0 - model.seed_prob[v];
    }
    if (seed_p == 0.0) {
      continue;
    }
    for (std::uint64_t edge_bits = 0; edge_bits < (1ull << n_edges); ++edge_bits) {
      double p = seed_p;
      for (int e = 0; e < n_edges; ++e) {
        p *= (edge_bits >> e) & 1u ? model.edge_prob : 1.0 - model.edge_prob;
      }
      if (p == 0.0) {
        continue;
      }
      bool all_on = true;
      for (int target : targets) {
        bool on = (seed_bits >> target) & 1u;
        for (int e = 0; !on && e < n_edges; ++e) {
          if (!((edge_bits >> e) & 1u)) {
            continue;
          }
          const auto [a, b] = model.edges[e];
          if (a == target) {
            on = (seed_bits >> b) & 1u;
          } else if (b == target) {
            on = (seed_bits >> a) & 1u;
          }
        }
        if (!on) {
          all_on = false;
          break;
        }
      }
      if (all_on) {
        total += p;
      }
    }
  }
  return total;
}

}  // namespace

double enum_confined_first(double lambda, double mu, int degree) {
  LocalModel model;
  model.seed_prob.assign(static_cast<std::size_t>(degree) + 1, lambda);
  model.edge_prob = mu;
  for (int k = 1; k <= degree; ++k) {
    model.edges.emplace_back(0, k);
  }
  return enumerate_pair_product(model, {0});
}

double enum_confined_cross(double lambda_l, double lambda_m, double mu, int degree) {
  // Colours share the edges; model colour m as a second block of seed bits.
  const int block = degree + 1;
  LocalModel model;
  model.seed_prob.assign(static_cast<std::size_t>(block), lambda_l);
  model.seed_prob.insert(model.seed_prob.end(), static_cast<std::size_t>(block), lambda_m);
  model.edge_prob = mu;
  for (int k = 1; k <= degree; ++k) {
    model.edges.emplace_back(0, k);
  }
  // Colour-m copies of the same physical edges attach to the second block.
  const int n_physical = static_cast<int>(model.edges.size());
  double total = 0.0;
  const int n_seeds = 2 * block;
  for (std::uint64_t seed_bits = 0; seed_bits < (1ull << n_seeds); ++seed_bits) {
    double seed_p = 1.0;
    for (int v = 0; v < n_seeds; ++v) {
      seed_p *= (seed_bits >> v) & 1u ? model.seed_prob[v] : 1.0 - model.seed_prob[v];
    }
    if (seed_p == 0.0) {
      continue;
    }
    for (std::uint64_t edge_bits = 0; edge_bits < (1ull << n_physical); ++edge_bits) {
      double p = seed_p;
      for (int e = 0; e < n_physical; ++e) {
        p *= (edge_bits >> e) & 1u ? mu : 1.0 - mu;
      }
      if (p == 0.0) {
        continue;
      }
      bool y_l = (seed_bits >> 0) & 1u;
      bool y_m = (seed_bits >> block) & 1u;
      for (int e = 0; e < n_physical; ++e) {
        if (!((edge_bits >> e) & 1u)) {
          continue;
        }
        const int neighbour = model.edges[e].second;
        y_l = y_l || ((seed_bits >> neighbour) & 1u);
        y_m = y_m || ((seed_bits >> (block + neighbour)) & 1u);
      }
      if (y_l && y_m) {
        total += p;
      }
    }
  }
  return total;
}

double enum_confined_pair(double lambda, double mu) {
  // Interior adjacent pair i=(0,0), j=(0,1) of the triangular lattice with
  // the (r,c)-(r+1,c+1) diagonal convention.
  const Coord i{0, 0};
  const Coord j{0, 1};
  std::map<Coord, int> index;
  auto intern = [&](Coord c) {
    return index.emplace(c, static_cast<int>(index.size())).first->second;
  };
  const int idx_i = intern(i);
  const int idx_j = intern(j);
  LocalModel model;
  model.edge_prob = mu;
  for (Coord centre : {i, j}) {
    for (const auto& [dr, dc] : kTriOffsets) {
      const Coord other{centre.first + dr, centre.second + dc};
      const int a = intern(centre);
      const int b = intern(other);
      bool duplicate = false;
      for (const auto& [ea, eb] : model.edges) {
        if ((ea == a && eb == b) || (ea == b && eb == a)) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) {
        model.edges.emplace_back(a, b);
      }
    }
  }
  model.seed_prob.assign(index.size(), lambda);
  return enumerate_pair_product(model, {idx_i, idx_j});
}

}  // namespace oracles
