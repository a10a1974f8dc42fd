#include "percmsm/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace percmsm {

namespace {

struct Offset {
  int dr;
  int dc;
};

// Ascending row-major order, so neighbor lists come out sorted.
constexpr std::array<Offset, 6> kTriangularOffsets = {
    {{-1, -1}, {-1, 0}, {0, -1}, {0, 1}, {1, 0}, {1, 1}}};
constexpr std::array<Offset, 4> kSquareOffsets = {{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

std::span<const Offset> offsets_for(LatticeKind kind) {
  if (kind == LatticeKind::triangular) {
    return kTriangularOffsets;
  }
  return kSquareOffsets;
}

}  // namespace

double critical_probability(LatticeKind kind) {
  if (kind == LatticeKind::triangular) {
    return 2.0 * std::sin(std::numbers::pi / 18.0);
  }
  return 0.5;
}

std::string to_string(LatticeKind kind) {
  return kind == LatticeKind::triangular ? "triangular" : "square";
}

LatticeKind lattice_kind_from_string(const std::string& name) {
  if (name == "triangular") {
    return LatticeKind::triangular;
  }
  if (name == "square") {
    return LatticeKind::square;
  }
  throw std::invalid_argument("unknown lattice kind: " + name);
}

Lattice::Lattice(LatticeKind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("lattice dimensions must be at least 1x1");
  }
  const auto m = static_cast<std::int64_t>(rows);
  const auto n = static_cast<std::int64_t>(cols);
  std::int64_t expected = m * (n - 1) + n * (m - 1);
  if (kind == LatticeKind::triangular) {
    expected += (m - 1) * (n - 1);
  }
  edges_.reserve(static_cast<std::size_t>(expected));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto v = static_cast<Vertex>(r) * static_cast<Vertex>(cols) + static_cast<Vertex>(c);
      if (c + 1 < cols) {
        edges_.push_back({v, v + 1});
      }
      if (r + 1 < rows) {
        edges_.push_back({v, v + static_cast<Vertex>(cols)});
      }
      if (kind == LatticeKind::triangular && r + 1 < rows && c + 1 < cols) {
        edges_.push_back({v, v + static_cast<Vertex>(cols) + 1});
      }
    }
  }
}

Vertex Lattice::vertex_at(int row, int col) const {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw std::invalid_argument("vertex coordinates out of range");
  }
  return static_cast<Vertex>(row) * static_cast<Vertex>(cols_) + static_cast<Vertex>(col);
}

std::vector<Vertex> Lattice::neighbors(Vertex v) const {
  if (static_cast<std::int64_t>(v) >= vertex_count()) {
    throw std::invalid_argument("vertex index out of range");
  }
  const int r = row_of(v);
  const int c = col_of(v);
  std::vector<Vertex> out;
  out.reserve(6);
  for (const auto& [dr, dc] : offsets_for(kind_)) {
    const int rr = r + dr;
    const int cc = c + dc;
    if (rr >= 0 && rr < rows_ && cc >= 0 && cc < cols_) {
      out.push_back(static_cast<Vertex>(rr) * static_cast<Vertex>(cols_) + static_cast<Vertex>(cc));
    }
  }
  return out;
}

int Lattice::degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

bool contains(const Lattice& parent, const Sublattice& sub) {
  return sub.rows >= 1 && sub.cols >= 1 && sub.row_offset >= 0 && sub.col_offset >= 0 &&
         sub.row_offset + sub.rows <= parent.rows() && sub.col_offset + sub.cols <= parent.cols();
}

bool window_contains(const Sublattice& sub, int row, int col) {
  return row >= sub.row_offset && row < sub.row_offset + sub.rows && col >= sub.col_offset &&
         col < sub.col_offset + sub.cols;
}

std::vector<Vertex> exterior_boundary(const Lattice& parent, const Sublattice& sub) {
  if (!contains(parent, sub)) {
    throw std::invalid_argument("sublattice does not fit inside parent");
  }
  // Any vertex adjacent to the window lies in the one-cell ring around it.
  std::vector<Vertex> out;
  const int r_lo = std::max(0, sub.row_offset - 1);
  const int r_hi = std::min(parent.rows() - 1, sub.row_offset + sub.rows);
  const int c_lo = std::max(0, sub.col_offset - 1);
  const int c_hi = std::min(parent.cols() - 1, sub.col_offset + sub.cols);
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      if (window_contains(sub, r, c)) {
        continue;
      }
      const Vertex v = parent.vertex_at(r, c);
      for (Vertex u : parent.neighbors(v)) {
        if (window_contains(sub, parent.row_of(u), parent.col_of(u))) {
          out.push_back(v);
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace percmsm
