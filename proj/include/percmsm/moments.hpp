#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>

#include "percmsm/lattice.hpp"
#include "percmsm/percolation.hpp"

namespace percmsm {

// Generalized moments of a colour field: per-colour vertex mean and
// adjacent-pair product mean.
struct MomentVector {
  Eigen::VectorXd ybar;  // (1/n_I) sum_i Y^l_i
  Eigen::VectorXd zbar;  // (1/n_p) sum_{(i,j) adjacent} Y^l_i Y^l_j
  std::int64_t n_vertices = 0;
  std::int64_t n_pairs = 0;
};

MomentVector empirical_moments(const ColourField& field);

// Vertex mean and pair mean of one colour restricted to a window; only pairs
// with both endpoints inside count.
std::pair<double, double> window_moments(const ColourField& field, const Sublattice& window,
                                         int colour);

// Exact single-vertex moment of the neighbour-confined model at an interior
// vertex of the given degree (6 triangular, 4 square):
//   lambda + (1-lambda) sum_{k=1}^{deg} C(deg,k) mu^k (1-mu)^{deg-k} (1-(1-lambda)^k).
double confined_first_moment(double lambda, double mu, int degree);

// Exact same-vertex cross-colour moment E[Y^l Y^m] of the confined model,
// split over the four seeding states of the vertex.
double confined_cross_colour_moment(double lambda_l, double lambda_m, double mu, int degree);

// Series for the adjacent-pair moment E[Y^l_i Y^l_j] of the confined model,
//   lambda^2 + 2 lambda mu + 8 lambda^2 mu + 2 lambda mu^2
//   - 10 lambda^3 mu + 9 lambda^2 mu^2,
// truncation error O(lambda^5); inputs restricted to [0, 0.2].
double confined_pair_moment(double lambda, double mu);

// Leading-term truncations of the two exact moments above, same error order.
double confined_first_moment_series(double lambda, double mu);
double confined_cross_colour_moment_series(double lambda_l, double lambda_m, double mu);

// Upper bound 2 mu n_p on the expected number of vertices in open components
// of size >= 2, and the interior-vertex estimate n_I (1-(1-mu)^deg) that
// ignores the boundary correction.
double contaminated_count_bound(double mu, const Lattice& lattice);
double contaminated_count_interior(double mu, const Lattice& lattice);

}  // namespace percmsm
