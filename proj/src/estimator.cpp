#include "percmsm/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "percmsm/errors.hpp"
#include "percmsm/parallel.hpp"

namespace percmsm {

namespace {

ParameterVector split_parameters(const Eigen::VectorXd& flat) {
  ParameterVector theta;
  theta.lambdas = flat.head(flat.size() - 1);
  theta.mu = flat[flat.size() - 1];
  return theta;
}

Eigen::VectorXd flatten_parameters(const ParameterVector& theta) {
  Eigen::VectorXd flat(theta.colour_count() + 1);
  flat.head(theta.colour_count()) = theta.lambdas;
  flat[theta.colour_count()] = theta.mu;
  return flat;
}

bool all_extreme(const Eigen::VectorXd& ybar) {
  for (Eigen::Index l = 0; l < ybar.size(); ++l) {
    if (ybar[l] != 0.0 && ybar[l] != 1.0) {
      return false;
    }
  }
  return true;
}

}  // namespace

Eigen::VectorXd weight_matrix(const MomentVector& data_moments) {
  const auto n_colours = data_moments.ybar.size();
  Eigen::VectorXd omega(2 * n_colours);
  for (Eigen::Index l = 0; l < n_colours; ++l) {
    const double y = data_moments.ybar[l];
    const double z = data_moments.zbar[l];
    omega[l] = y == 0.0 ? 1.0 : 1.0 / (y * y);
    omega[n_colours + l] = z == 0.0 ? 1.0 : 1.0 / (z * z);
  }
  return omega;
}

Eigen::VectorXd moment_gap(const ParameterVector& theta, const ObjectiveSpec& spec) {
  if (spec.crn == nullptr) {
    throw std::invalid_argument("objective spec has no random-number pool");
  }
  const CrnPool& pool = *spec.crn;
  const int n_colours = theta.colour_count();
  if (n_colours != pool.colour_count() ||
      n_colours != static_cast<int>(spec.data_moments.ybar.size())) {
    throw std::invalid_argument("colour counts of theta, pool and data moments disagree");
  }
  validate_probabilities(theta);
  if (!(theta.mu < pool.lattice().critical_probability())) {
    throw std::invalid_argument("mu must stay below the critical probability");
  }

  Eigen::VectorXd ybar_sum = Eigen::VectorXd::Zero(n_colours);
  Eigen::VectorXd zbar_sum = Eigen::VectorXd::Zero(n_colours);
  for (int s = 0; s < pool.replicate_count(); ++s) {
    const ColourField field = simulate(pool.lattice(), theta, pool, s, spec.variant);
    const MomentVector sim = empirical_moments(field);
    ybar_sum += sim.ybar;
    zbar_sum += sim.zbar;
  }
  const double inv_n_s = 1.0 / static_cast<double>(pool.replicate_count());
  Eigen::VectorXd eta(2 * n_colours);
  eta.head(n_colours) = spec.data_moments.ybar - inv_n_s * ybar_sum;
  eta.tail(n_colours) = spec.data_moments.zbar - inv_n_s * zbar_sum;
  return eta;
}

double objective(const ParameterVector& theta, const ObjectiveSpec& spec) {
  const Eigen::VectorXd eta = moment_gap(theta, spec);
  if (spec.omega_diag.size() != eta.size()) {
    throw std::invalid_argument("weight vector must have 2 n_colours entries");
  }
  return (spec.omega_diag.array() * eta.array().square()).sum();
}

std::vector<ParameterVector> initial_points(int n_opt, const Eigen::VectorXd& lambda_max,
                                            double mu_max) {
  if (n_opt < 1) {
    throw std::invalid_argument("n_opt must be at least 1");
  }
  std::vector<ParameterVector> points;
  points.reserve(n_opt);
  for (int k = 1; k <= n_opt; ++k) {
    ParameterVector theta;
    const double lambda_scale = 1.0 - static_cast<double>(k - 1) / static_cast<double>(n_opt);
    theta.lambdas = lambda_scale * lambda_max;
    theta.mu = n_opt > 1
                   ? static_cast<double>(k - 1) / static_cast<double>(n_opt - 1) * mu_max
                   : 0.0;
    points.push_back(std::move(theta));
  }
  return points;
}

EstimationResult estimate_msm(const ColourField& data, const EstimationConfig& config) {
  if (data.lattice == nullptr) {
    throw std::invalid_argument("data field has no lattice");
  }
  const Lattice& lattice = *data.lattice;
  const double p_c = lattice.critical_probability();
  if (config.n_s < 1 || config.n_opt < 1) {
    throw std::invalid_argument("n_s and n_opt must be at least 1");
  }
  if (!(config.mu_max > 0.0 && config.mu_max < p_c)) {
    throw std::invalid_argument("mu_max must lie in (0, p_c); estimation assumes subcriticality");
  }

  EstimationResult result;
  result.config = config;
  result.data_moments = empirical_moments(data);
  const Eigen::VectorXd& ybar = result.data_moments.ybar;
  if (all_extreme(ybar)) {
    throw DegenerateDataError(
        "every colour is empty or saturated; such fields carry no information about theta");
  }

  const int n_colours = data.n_colours;
  const CrnPool pool(lattice, n_colours, config.n_s, config.method, config.master_seed);
  ObjectiveSpec spec{result.data_moments, weight_matrix(result.data_moments), &pool,
                     config.variant};

  // The data frequency bounds lambda from above; an unseen colour is pinned.
  Eigen::VectorXd lower = Eigen::VectorXd::Zero(n_colours + 1);
  Eigen::VectorXd upper(n_colours + 1);
  upper.head(n_colours) = ybar;
  upper[n_colours] = config.mu_max;

  const std::vector<ParameterVector> starts = initial_points(config.n_opt, ybar, config.mu_max);
  auto boxed_objective = [&](const Eigen::VectorXd& flat) {
    return objective(split_parameters(flat), spec);
  };

  result.starts.resize(starts.size());
  parallel_for(static_cast<int>(starts.size()), config.n_threads, [&](int k) {
    const MinimizeResult best = minimize_bounded(boxed_objective, flatten_parameters(starts[k]),
                                                 lower, upper, config.optimizer);
    StartRecord record;
    record.initial = starts[k];
    record.final_point = split_parameters(best.x);
    record.alpha = best.value;
    record.evaluations = best.evaluations;
    record.converged = best.converged;
    result.starts[k] = std::move(record);
  });

  int winner = 0;
  for (int k = 1; k < static_cast<int>(result.starts.size()); ++k) {
    if (result.starts[k].alpha < result.starts[winner].alpha) {
      winner = k;
    }
  }
  result.theta_hat = result.starts[winner].final_point;
  result.alpha_value = result.starts[winner].alpha;
  result.converged = result.starts[winner].converged;
  return result;
}

ParameterVector estimate_trivial(const ColourField& data) {
  const MomentVector moments = empirical_moments(data);
  ParameterVector theta;
  theta.lambdas = moments.ybar;
  theta.mu = 0.0;
  return theta;
}

AbcResult abc_rejection(const ColourField& data, const AbcConfig& config) {
  if (data.lattice == nullptr) {
    throw std::invalid_argument("data field has no lattice");
  }
  const Lattice& lattice = *data.lattice;
  const double p_c = lattice.critical_probability();
  if (!(config.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (config.n_draws < 1) {
    throw std::invalid_argument("n_draws must be at least 1");
  }
  const int n_colours = data.n_colours;
  if (config.prior_lower.colour_count() != n_colours ||
      config.prior_upper.colour_count() != n_colours) {
    throw std::invalid_argument("prior box must have one interval per colour");
  }
  validate_probabilities(config.prior_lower);
  validate_probabilities(config.prior_upper);
  if (!(config.prior_upper.mu < p_c)) {
    throw std::invalid_argument("prior box must stay below the critical probability");
  }
  for (int l = 0; l < n_colours; ++l) {
    if (config.prior_lower.lambdas[l] > config.prior_upper.lambdas[l]) {
      throw std::invalid_argument("prior box is empty");
    }
  }
  if (config.prior_lower.mu > config.prior_upper.mu) {
    throw std::invalid_argument("prior box is empty");
  }

  const MomentVector data_moments = empirical_moments(data);
  const Eigen::VectorXd omega = weight_matrix(data_moments);

  AbcResult result;
  result.n_draws = config.n_draws;
  for (int k = 0; k < config.n_draws; ++k) {
    rng::Stream prior_stream(
        rng::derive_key({config.seed, 0x70, static_cast<std::uint64_t>(k)}));
    ParameterVector theta;
    theta.lambdas.resize(n_colours);
    for (int l = 0; l < n_colours; ++l) {
      const double lo = config.prior_lower.lambdas[l];
      const double hi = config.prior_upper.lambdas[l];
      theta.lambdas[l] = lo + (hi - lo) * prior_stream.next_unit();
    }
    theta.mu = config.prior_lower.mu +
               (config.prior_upper.mu - config.prior_lower.mu) * prior_stream.next_unit();

    // One simulation per proposal, fresh randomness per draw.
    const CrnPool draw_pool(lattice, n_colours, 1, SamplingMethod::threshold,
                            rng::derive_key({config.seed, 0x71, static_cast<std::uint64_t>(k)}));
    const ObjectiveSpec spec{data_moments, omega, &draw_pool, config.variant};
    const double alpha = objective(theta, spec);
    if (alpha < config.epsilon) {
      result.accepted.push_back(std::move(theta));
      result.accepted_alpha.push_back(alpha);
    }
  }
  result.acceptance_rate =
      static_cast<double>(result.accepted.size()) / static_cast<double>(config.n_draws);
  return result;
}

}  // namespace percmsm
