#include "percmsm/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace percmsm {

namespace {

struct BoxTransform {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<int> free_dims;  // indices with upper > lower
  Eigen::VectorXd fixed_x;     // full-dimensional template

  Eigen::VectorXd to_x(const Eigen::VectorXd& u) const {
    Eigen::VectorXd x = fixed_x;
    for (std::size_t k = 0; k < free_dims.size(); ++k) {
      const int j = free_dims[k];
      const double t = 0.5 * (std::sin(u[static_cast<Eigen::Index>(k)]) + 1.0);
      x[j] = lower[j] + (upper[j] - lower[j]) * t;
    }
    return x;
  }

  Eigen::VectorXd to_u(const Eigen::VectorXd& x) const {
    Eigen::VectorXd u(static_cast<Eigen::Index>(free_dims.size()));
    for (std::size_t k = 0; k < free_dims.size(); ++k) {
      const int j = free_dims[k];
      const double t = 2.0 * (x[j] - lower[j]) / (upper[j] - lower[j]) - 1.0;
      u[static_cast<Eigen::Index>(k)] = std::asin(std::clamp(t, -1.0, 1.0));
    }
    return u;
  }
};

}  // namespace

MinimizeResult minimize_bounded(const std::function<double(const Eigen::VectorXd&)>& objective,
                                const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                                const Eigen::VectorXd& upper, const MinimizeOptions& options) {
  const auto dim = x0.size();
  if (lower.size() != dim || upper.size() != dim) {
    throw std::invalid_argument("bound dimensions differ from the start point");
  }
  BoxTransform box{lower, upper, {}, x0};
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (upper[j] < lower[j]) {
      throw std::invalid_argument("upper bound below lower bound");
    }
    if (x0[j] < lower[j] || x0[j] > upper[j]) {
      throw std::invalid_argument("start point outside bounds");
    }
    if (upper[j] > lower[j]) {
      box.free_dims.push_back(static_cast<int>(j));
    } else {
      box.fixed_x[j] = lower[j];
    }
  }

  MinimizeResult result;
  const int n = static_cast<int>(box.free_dims.size());
  if (n == 0) {
    result.x = box.fixed_x;
    result.value = objective(result.x);
    result.evaluations = 1;
    result.converged = true;
    return result;
  }

  const int max_evals = options.max_evaluations > 0 ? options.max_evaluations : 400 * n;
  int evals = 0;
  auto eval_u = [&](const Eigen::VectorXd& u) {
    ++evals;
    return objective(box.to_x(u));
  };

  // Initial simplex: start point plus a bump per coordinate. The bump has a
  // floor of 0.15 rad so that the simplex spans the plateaus of
  // piecewise-constant objectives (count-based simulators change value only
  // when a rounded count moves).
  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.reserve(n + 1);
  simplex.push_back(box.to_u(x0));
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd u = simplex[0];
    u[k] += std::max(0.05 * std::abs(u[k]), 0.15);
    simplex.push_back(std::move(u));
  }
  values.reserve(n + 1);
  for (const auto& u : simplex) {
    values.push_back(eval_u(u));
  }

  std::vector<int> order(simplex.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s2;
    std::vector<double> v2;
    s2.reserve(order.size());
    v2.reserve(order.size());
    for (int idx : order) {
      s2.push_back(std::move(simplex[idx]));
      v2.push_back(values[idx]);
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };
  sort_simplex();

  constexpr double rho = 1.0;    // reflection
  constexpr double chi = 2.0;    // expansion
  constexpr double psi = 0.5;    // contraction
  constexpr double sigma = 0.5;  // shrink

  while (evals < max_evals) {
    double value_spread = 0.0;
    double coord_spread = 0.0;
    for (int k = 1; k <= n; ++k) {
      value_spread = std::max(value_spread, std::abs(values[k] - values[0]));
      coord_spread = std::max(coord_spread, (simplex[k] - simplex[0]).cwiseAbs().maxCoeff());
    }
    if (value_spread <= options.objective_tolerance && coord_spread <= options.simplex_tolerance) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
      centroid += simplex[k];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + rho * (centroid - simplex[n]);
    const double f_reflected = eval_u(reflected);
    if (f_reflected < values[0]) {
      const Eigen::VectorXd expanded = centroid + rho * chi * (centroid - simplex[n]);
      const double f_expanded = eval_u(expanded);
      if (f_expanded < f_reflected) {
        simplex[n] = expanded;
        values[n] = f_expanded;
      } else {
        simplex[n] = reflected;
        values[n] = f_reflected;
      }
    } else if (f_reflected < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = f_reflected;
    } else {
      bool shrink = false;
      if (f_reflected < values[n]) {
        // outside contraction
        const Eigen::VectorXd contracted = centroid + psi * rho * (centroid - simplex[n]);
        const double f_contracted = eval_u(contracted);
        if (f_contracted <= f_reflected) {
          simplex[n] = contracted;
          values[n] = f_contracted;
        } else {
          shrink = true;
        }
      } else {
        // inside contraction
        const Eigen::VectorXd contracted = centroid - psi * (centroid - simplex[n]);
        const double f_contracted = eval_u(contracted);
        if (f_contracted < values[n]) {
          simplex[n] = contracted;
          values[n] = f_contracted;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (int k = 1; k <= n; ++k) {
          simplex[k] = simplex[0] + sigma * (simplex[k] - simplex[0]);
          values[k] = eval_u(simplex[k]);
        }
      }
    }
    sort_simplex();
  }

  sort_simplex();
  result.x = box.to_x(simplex[0]);
  result.value = values[0];
  result.evaluations = evals;
  return result;
}

}  // namespace percmsm
