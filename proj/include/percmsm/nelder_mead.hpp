#pragma once

#include <Eigen/Core>
#include <functional>

namespace percmsm {

struct MinimizeOptions {
  double simplex_tolerance = 1e-6;    // max coordinate spread of the simplex
  double objective_tolerance = 1e-6;  // max objective spread of the simplex
  int max_evaluations = 0;            // 0 -> 400 * free dimension
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free bounded minimization: Nelder-Mead run in a sine-transformed
// coordinate system, x_j = lo_j + (hi_j - lo_j)(sin u_j + 1)/2, so every
// evaluated point lies inside the box. Coordinates with lo_j == hi_j are held
// fixed. Returns the best simplex point; converged=false means the evaluation
// budget ran out first and the best point so far is reported.
MinimizeResult minimize_bounded(const std::function<double(const Eigen::VectorXd&)>& objective,
                                const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                                const Eigen::VectorXd& upper, const MinimizeOptions& options = {});

}  // namespace percmsm
