#include "percmsm/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "percmsm/errors.hpp"

namespace percmsm {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " outside [0,1]");
  }
}

void check_degree(int degree) {
  if (degree != 4 && degree != 6) {
    throw std::invalid_argument("interior degree must be 4 or 6");
  }
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return out;
}

// sum_{k=1}^{deg} C(deg,k) mu^k (1-mu)^{deg-k} (1-(1-lambda)^k)
double contamination_sum(double lambda, double mu, int degree) {
  double sum = 0.0;
  for (int k = 1; k <= degree; ++k) {
    sum += binomial(degree, k) * std::pow(mu, k) * std::pow(1.0 - mu, degree - k) *
           (1.0 - std::pow(1.0 - lambda, k));
  }
  return sum;
}

// Same with the joint factor for two independently seeded colours.
double contamination_sum_pairwise(double lambda_l, double lambda_m, double mu, int degree) {
  double sum = 0.0;
  for (int k = 1; k <= degree; ++k) {
    sum += binomial(degree, k) * std::pow(mu, k) * std::pow(1.0 - mu, degree - k) *
           (1.0 - std::pow(1.0 - lambda_l, k)) * (1.0 - std::pow(1.0 - lambda_m, k));
  }
  return sum;
}

int interior_degree(LatticeKind kind) { return kind == LatticeKind::triangular ? 6 : 4; }

}  // namespace

MomentVector empirical_moments(const ColourField& field) {
  if (field.lattice == nullptr) {
    throw std::invalid_argument("field has no lattice");
  }
  const Lattice& lattice = *field.lattice;
  if (lattice.edge_count() < 1) {
    throw DegenerateDataError("lattice has no adjacent pairs; pair moments undefined");
  }
  const int n_colours = field.n_colours;
  MomentVector out;
  out.n_vertices = lattice.vertex_count();
  out.n_pairs = lattice.edge_count();
  Eigen::VectorXd vertex_counts = Eigen::VectorXd::Zero(n_colours);
  Eigen::VectorXd pair_counts = Eigen::VectorXd::Zero(n_colours);
  for (ColourMask mask : field.masks) {
    for (int l = 0; mask != 0 && l < n_colours; ++l) {
      vertex_counts[l] += static_cast<double>((mask >> l) & 1u);
    }
  }
  for (const Edge& edge : lattice.edges()) {
    const ColourMask both = field.masks[edge.a] & field.masks[edge.b];
    for (int l = 0; both != 0 && l < n_colours; ++l) {
      pair_counts[l] += static_cast<double>((both >> l) & 1u);
    }
  }
  out.ybar = vertex_counts / static_cast<double>(out.n_vertices);
  out.zbar = pair_counts / static_cast<double>(out.n_pairs);
  return out;
}

std::pair<double, double> window_moments(const ColourField& field, const Sublattice& window,
                                         int colour) {
  if (field.lattice == nullptr || !contains(*field.lattice, window)) {
    throw std::invalid_argument("window does not fit inside the field's lattice");
  }
  if (colour < 0 || colour >= field.n_colours) {
    throw std::invalid_argument("colour index out of range");
  }
  const Lattice& lattice = *field.lattice;
  const ColourMask bit = ColourMask{1} << colour;

  std::int64_t vertex_count = 0;
  for (int r = window.row_offset; r < window.row_offset + window.rows; ++r) {
    for (int c = window.col_offset; c < window.col_offset + window.cols; ++c) {
      vertex_count += (field.masks[lattice.vertex_at(r, c)] & bit) ? 1 : 0;
    }
  }

  std::int64_t pair_count = 0;
  std::int64_t pair_total = 0;
  for (const Edge& edge : lattice.edges()) {
    if (!window_contains(window, lattice.row_of(edge.a), lattice.col_of(edge.a)) ||
        !window_contains(window, lattice.row_of(edge.b), lattice.col_of(edge.b))) {
      continue;
    }
    ++pair_total;
    pair_count += (field.masks[edge.a] & field.masks[edge.b] & bit) ? 1 : 0;
  }
  if (pair_total == 0) {
    throw DegenerateDataError("window has no interior adjacent pairs");
  }
  const double n_window = static_cast<double>(window.rows) * static_cast<double>(window.cols);
  return {static_cast<double>(vertex_count) / n_window,
          static_cast<double>(pair_count) / static_cast<double>(pair_total)};
}

double confined_first_moment(double lambda, double mu, int degree) {
  check_probability(lambda, "lambda");
  check_probability(mu, "mu");
  check_degree(degree);
  return lambda + (1.0 - lambda) * contamination_sum(lambda, mu, degree);
}

double confined_cross_colour_moment(double lambda_l, double lambda_m, double mu, int degree) {
  check_probability(lambda_l, "lambda_l");
  check_probability(lambda_m, "lambda_m");
  check_probability(mu, "mu");
  check_degree(degree);
  return lambda_l * lambda_m + lambda_l * (1.0 - lambda_m) * contamination_sum(lambda_m, mu, degree) +
         (1.0 - lambda_l) * lambda_m * contamination_sum(lambda_l, mu, degree) +
         (1.0 - lambda_l) * (1.0 - lambda_m) *
             contamination_sum_pairwise(lambda_l, lambda_m, mu, degree);
}

double confined_pair_moment(double lambda, double mu) {
  if (!(lambda >= 0.0 && lambda <= 0.2) || !(mu >= 0.0 && mu <= 0.2)) {
    throw std::domain_error("pair-moment series is only trusted on [0, 0.2]");
  }
  return lambda * lambda + 2.0 * lambda * mu + 8.0 * lambda * lambda * mu +
         2.0 * lambda * mu * mu - 10.0 * lambda * lambda * lambda * mu +
         9.0 * lambda * lambda * mu * mu;
}

double confined_first_moment_series(double lambda, double mu) {
  check_probability(lambda, "lambda");
  check_probability(mu, "mu");
  return lambda + 6.0 * lambda * mu - 6.0 * lambda * lambda * mu -
         15.0 * lambda * lambda * mu * mu;
}

double confined_cross_colour_moment_series(double lambda_l, double lambda_m, double mu) {
  check_probability(lambda_l, "lambda_l");
  check_probability(lambda_m, "lambda_m");
  check_probability(mu, "mu");
  return lambda_l * lambda_m + 18.0 * lambda_l * lambda_m * mu -
         12.0 * (lambda_l * lambda_l * lambda_m + lambda_l * lambda_m * lambda_m) * mu +
         30.0 * lambda_l * lambda_m * mu * mu;
}

double contaminated_count_bound(double mu, const Lattice& lattice) {
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw std::invalid_argument("mu outside [0,1)");
  }
  return 2.0 * mu * static_cast<double>(lattice.edge_count());
}

double contaminated_count_interior(double mu, const Lattice& lattice) {
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw std::invalid_argument("mu outside [0,1)");
  }
  const int degree = interior_degree(lattice.kind());
  return static_cast<double>(lattice.vertex_count()) * (1.0 - std::pow(1.0 - mu, degree));
}

}  // namespace percmsm
