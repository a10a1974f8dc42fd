#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "percmsm/estimator.hpp"
#include "percmsm/percolation.hpp"

namespace percmsm {

// 100 |1 - estimate/truth| per coordinate (lambdas then mu).
Eigen::VectorXd relative_bias_percent(const ParameterVector& estimate,
                                      const ParameterVector& truth);

struct MethodOutcome {
  SamplingMethod method = SamplingMethod::threshold;
  ParameterVector theta_hat;
  Eigen::VectorXd bias_percent;
  double alpha = 0.0;
  double seconds = 0.0;
  bool converged = true;
  int starts = 0;
};

struct TableRow {
  EstimationConfig config;
  MethodOutcome outcome_m1;
  MethodOutcome outcome_m2;
};

// One synthetic dataset, estimated under both sampling methods for each
// config; mirrors the synthetic-data experiment tables.
struct TableReport {
  ParameterVector theta0;
  LatticeKind kind = LatticeKind::triangular;
  int rows = 0;
  int cols = 0;
  Eigen::VectorXd seed_frequency;
  Eigen::VectorXd observed_frequency;
  double open_edge_frequency = 0.0;
  std::uint64_t dataset_seed = 0;
  std::vector<TableRow> results;
};

TableReport run_table_experiment(const ParameterVector& theta0, LatticeKind kind, int rows,
                                 int cols, std::span<const EstimationConfig> configs,
                                 std::uint64_t study_seed);

struct AlphaComparisonRow {
  SamplingMethod method = SamplingMethod::threshold;
  double alpha_theta0 = 0.0;
  double alpha_trivial = 0.0;
  double alpha_theta_hat = 0.0;
  ParameterVector theta_hat;
};

// Objective values at the true parameter, the trivial estimate and the MSM
// estimate, all on the pool the estimation itself used; one row per method.
std::vector<AlphaComparisonRow> alpha_comparison(const ParameterVector& theta0,
                                                 const ColourField& data,
                                                 const EstimationConfig& config);

struct ConvergenceRow {
  int rows = 0;
  int cols = 0;
  std::int64_t n_vertices = 0;
  std::int64_t n_pairs = 0;
  double alpha_m1 = 0.0;
  double alpha_m2 = 0.0;
  double alpha_tilde_m1 = 0.0;  // unweighted eta^T eta
  double alpha_tilde_m2 = 0.0;
};

// Fresh dataset per size, objective evaluated at theta0 only; sizes must be
// strictly increasing.
std::vector<ConvergenceRow> convergence_study(const ParameterVector& theta0, LatticeKind kind,
                                              std::span<const std::pair<int, int>> sizes, int n_s,
                                              std::uint64_t study_seed);

// Moment-surface scan: single-colour fields simulated on an outer lattice,
// moments read off a central window so the trimmed field approximates the
// unbounded process.
struct ScanSpec {
  std::vector<double> lambdas;
  std::vector<double> mus;
  LatticeKind kind = LatticeKind::triangular;
  int outer_rows = 300;
  int outer_cols = 300;
  int inner_rows = 100;
  int inner_cols = 100;
  int n_s = 5;
  std::uint64_t master_seed = 1;
  int n_threads = 0;
};

struct ScanRow {
  double lambda = 0.0;
  double mu = 0.0;
  double m1 = 0.0;  // window vertex moment, replicate mean
  double m2 = 0.0;  // window pair moment, replicate mean
  double m1_se = 0.0;
  double m2_se = 0.0;
};

std::vector<double> log_spaced(double lo, double hi, int n);

// Log-spaced axes, optionally with an extra mu row at the critical value.
ScanSpec make_scan_spec(int n_lambda, int n_mu, double lambda_lo, double lambda_hi, double mu_lo,
                        double mu_hi, bool critical_mu_row, LatticeKind kind);

// Rows ordered mu-major: index = i_mu * lambdas.size() + i_lambda.
std::vector<ScanRow> identifiability_scan(const ScanSpec& spec);

void write_scan_csv(const std::filesystem::path& path, const ScanSpec& spec,
                    std::span<const ScanRow> rows);
void write_scan_svg(const std::filesystem::path& path, const ScanSpec& spec,
                    std::span<const ScanRow> rows, int which_moment);
void write_convergence_csv(const std::filesystem::path& path, const ParameterVector& theta0,
                           int n_s, std::uint64_t study_seed, std::span<const ConvergenceRow> rows);
void write_table_csv(const std::filesystem::path& path, const TableReport& report);
void write_alpha_csv(const std::filesystem::path& path, const ParameterVector& theta0,
                     const EstimationConfig& config, std::span<const AlphaComparisonRow> rows);

}  // namespace percmsm
