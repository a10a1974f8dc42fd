#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace percmsm {

enum class LatticeKind { triangular, square };

// Bond-percolation critical probability of the infinite lattice:
// 2 sin(pi/18) for the triangular kind, 1/2 for the square kind.
double critical_probability(LatticeKind kind);

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& name);

using Vertex = std::uint32_t;

// Ordered pair of adjacent vertices, a < b.
struct Edge {
  Vertex a;
  Vertex b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Finite rectangular patch of the triangular or square lattice.
//
// Vertices are numbered row-major, 0..rows*cols-1. The triangular kind is
// realised as the square grid plus the (r,c)-(r+1,c+1) diagonal of every
// cell, giving interior degree 6 and
//   n_p = m(n-1) + n(m-1) + (m-1)(n-1)
// for an m x n patch; the square kind drops the diagonal term. Edges are
// listed in lexicographic (a,b) order. Immutable after construction.
class Lattice {
 public:
  Lattice(LatticeKind kind, int rows, int cols);

  LatticeKind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t vertex_count() const { return static_cast<std::int64_t>(rows_) * cols_; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }

  Vertex vertex_at(int row, int col) const;
  int row_of(Vertex v) const { return static_cast<int>(v / static_cast<Vertex>(cols_)); }
  int col_of(Vertex v) const { return static_cast<int>(v % static_cast<Vertex>(cols_)); }

  // Sorted, duplicate-free; symmetric by construction.
  std::vector<Vertex> neighbors(Vertex v) const;
  int degree(Vertex v) const;

  double critical_probability() const { return percmsm::critical_probability(kind_); }

 private:
  LatticeKind kind_;
  int rows_;
  int cols_;
  std::vector<Edge> edges_;
};

// Rectangular window into a parent lattice.
struct Sublattice {
  int row_offset = 0;
  int col_offset = 0;
  int rows = 0;
  int cols = 0;
};

bool contains(const Lattice& parent, const Sublattice& sub);
bool window_contains(const Sublattice& sub, int row, int col);

// Parent vertices outside the window that are adjacent to some window vertex,
// ascending.
std::vector<Vertex> exterior_boundary(const Lattice& parent, const Sublattice& sub);

}  // namespace percmsm
