#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "percmsm/crn.hpp"
#include "percmsm/moments.hpp"
#include "percmsm/nelder_mead.hpp"
#include "percmsm/percolation.hpp"

namespace percmsm {

// Diagonal weights (ybar^-2 .. , zbar^-2 ..); zero moments weigh 1.
Eigen::VectorXd weight_matrix(const MomentVector& data_moments);

struct ObjectiveSpec {
  MomentVector data_moments;
  Eigen::VectorXd omega_diag;  // 2 n_c entries
  const CrnPool* crn = nullptr;
  ModelVariant variant = ModelVariant::percolation;
};

// eta = (data ybar - mean simulated ybar, data zbar - mean simulated zbar),
// simulated over the frozen pool replicates in fixed order.
Eigen::VectorXd moment_gap(const ParameterVector& theta, const ObjectiveSpec& spec);

// alpha(theta) = eta^T Omega eta; a pure function of (theta, pool keys).
double objective(const ParameterVector& theta, const ObjectiveSpec& spec);

// Start k of n_opt: lambda scaled by 1-(k-1)/n_opt from its upper bound while
// mu walks up from 0 to mu_max (single start: mu = 0).
std::vector<ParameterVector> initial_points(int n_opt, const Eigen::VectorXd& lambda_max,
                                            double mu_max);

struct EstimationConfig {
  int n_s = 10;
  int n_opt = 5;
  double mu_max = 0.1;
  SamplingMethod method = SamplingMethod::threshold;
  ModelVariant variant = ModelVariant::percolation;
  std::uint64_t master_seed = 1;
  MinimizeOptions optimizer{};
  int n_threads = 0;  // 0 = hardware count; never changes the result
};

struct StartRecord {
  ParameterVector initial;
  ParameterVector final_point;
  double alpha = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct EstimationResult {
  ParameterVector theta_hat;
  double alpha_value = 0.0;
  bool converged = false;  // convergence flag of the winning start
  std::vector<StartRecord> starts;
  EstimationConfig config;
  MomentVector data_moments;
};

// Multi-start bounded search for the parameters that best reproduce the data
// moments, over the box [0, ybar^l] x ... x [0, mu_max]. Colours never seen
// in the data are pinned to zero. Deterministic given master_seed.
EstimationResult estimate_msm(const ColourField& data, const EstimationConfig& config);

// lambda^l = ybar^l, mu = 0; assumes no contamination happened.
ParameterVector estimate_trivial(const ColourField& data);

struct AbcConfig {
  ParameterVector prior_lower;  // box prior over theta
  ParameterVector prior_upper;
  double epsilon = 0.0;
  int n_draws = 0;
  std::uint64_t seed = 1;
  ModelVariant variant = ModelVariant::percolation;
};

struct AbcResult {
  std::vector<ParameterVector> accepted;
  std::vector<double> accepted_alpha;
  int n_draws = 0;
  double acceptance_rate = 0.0;
};

// Rejection sampling: each prior draw is simulated once with fresh (not
// common) randomness and kept iff its objective value falls below epsilon.
AbcResult abc_rejection(const ColourField& data, const AbcConfig& config);

}  // namespace percmsm
