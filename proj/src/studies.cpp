#include "percmsm/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "percmsm/moments.hpp"
#include "percmsm/parallel.hpp"

namespace percmsm {

namespace {

constexpr std::uint64_t kDatasetRole = 0x11;
constexpr std::uint64_t kEstimateRole = 0x12;
constexpr std::uint64_t kScanRole = 0x13;

std::string fmt(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

std::string fmt_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += fmt(v[i]);
  }
  return out;
}

MethodOutcome estimate_one_method(const ColourField& data, EstimationConfig config,
                                  SamplingMethod method, const ParameterVector& theta0,
                                  std::uint64_t master_seed) {
  config.method = method;
  config.master_seed = master_seed;
  const auto started = std::chrono::steady_clock::now();
  const EstimationResult result = estimate_msm(data, config);
  const auto finished = std::chrono::steady_clock::now();
  MethodOutcome outcome;
  outcome.method = method;
  outcome.theta_hat = result.theta_hat;
  outcome.bias_percent = relative_bias_percent(result.theta_hat, theta0);
  outcome.alpha = result.alpha_value;
  outcome.seconds = std::chrono::duration<double>(finished - started).count();
  outcome.converged = result.converged;
  outcome.starts = static_cast<int>(result.starts.size());
  return outcome;
}

}  // namespace

Eigen::VectorXd relative_bias_percent(const ParameterVector& estimate,
                                      const ParameterVector& truth) {
  if (estimate.colour_count() != truth.colour_count()) {
    throw std::invalid_argument("estimate and truth have different colour counts");
  }
  const int n = truth.colour_count();
  Eigen::VectorXd bias(n + 1);
  for (int l = 0; l < n; ++l) {
    bias[l] = 100.0 * std::abs(1.0 - estimate.lambdas[l] / truth.lambdas[l]);
  }
  bias[n] = 100.0 * std::abs(1.0 - estimate.mu / truth.mu);
  return bias;
}

TableReport run_table_experiment(const ParameterVector& theta0, LatticeKind kind, int rows,
                                 int cols, std::span<const EstimationConfig> configs,
                                 std::uint64_t study_seed) {
  validate_probabilities(theta0);
  const Lattice lattice(kind, rows, cols);
  const GeneratedDataset dataset = generate_synthetic_dataset(
      lattice, theta0, rng::derive_key({study_seed, kDatasetRole}));

  TableReport report;
  report.theta0 = theta0;
  report.kind = kind;
  report.rows = rows;
  report.cols = cols;
  report.seed_frequency = dataset.seed_frequency;
  report.observed_frequency = dataset.observed_frequency;
  report.open_edge_frequency = dataset.open_edge_frequency;
  report.dataset_seed = dataset.seed;

  for (std::size_t c = 0; c < configs.size(); ++c) {
    TableRow row;
    row.config = configs[c];
    row.outcome_m1 = estimate_one_method(
        dataset.field, configs[c], SamplingMethod::threshold, theta0,
        rng::derive_key({study_seed, kEstimateRole, c, 1}));
    row.outcome_m2 = estimate_one_method(
        dataset.field, configs[c], SamplingMethod::exact_count, theta0,
        rng::derive_key({study_seed, kEstimateRole, c, 2}));
    report.results.push_back(std::move(row));
  }
  return report;
}

std::vector<AlphaComparisonRow> alpha_comparison(const ParameterVector& theta0,
                                                 const ColourField& data,
                                                 const EstimationConfig& config) {
  std::vector<AlphaComparisonRow> rows;
  for (SamplingMethod method : {SamplingMethod::threshold, SamplingMethod::exact_count}) {
    EstimationConfig cfg = config;
    cfg.method = method;
    const EstimationResult result = estimate_msm(data, cfg);

    // The pool regenerates bit-identically from the run's own configuration.
    const CrnPool pool(*data.lattice, data.n_colours, cfg.n_s, method, cfg.master_seed);
    const ObjectiveSpec spec{result.data_moments, weight_matrix(result.data_moments), &pool,
                             cfg.variant};
    AlphaComparisonRow row;
    row.method = method;
    row.alpha_theta0 = objective(theta0, spec);
    row.alpha_trivial = objective(estimate_trivial(data), spec);
    row.alpha_theta_hat = result.alpha_value;
    row.theta_hat = result.theta_hat;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_study(const ParameterVector& theta0, LatticeKind kind,
                                              std::span<const std::pair<int, int>> sizes, int n_s,
                                              std::uint64_t study_seed) {
  validate_probabilities(theta0);
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    const auto before = static_cast<std::int64_t>(sizes[i - 1].first) * sizes[i - 1].second;
    const auto after = static_cast<std::int64_t>(sizes[i].first) * sizes[i].second;
    if (after <= before) {
      throw std::invalid_argument("lattice sizes must be strictly increasing");
    }
  }

  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const Lattice lattice(kind, sizes[i].first, sizes[i].second);
    const GeneratedDataset dataset = generate_synthetic_dataset(
        lattice, theta0, rng::derive_key({study_seed, kDatasetRole, i}));
    const MomentVector data_moments = empirical_moments(dataset.field);
    const Eigen::VectorXd omega = weight_matrix(data_moments);

    ConvergenceRow row;
    row.rows = sizes[i].first;
    row.cols = sizes[i].second;
    row.n_vertices = lattice.vertex_count();
    row.n_pairs = lattice.edge_count();
    for (SamplingMethod method : {SamplingMethod::threshold, SamplingMethod::exact_count}) {
      const CrnPool pool(lattice, theta0.colour_count(), n_s, method,
                         rng::derive_key({study_seed, kEstimateRole, i,
                                          static_cast<std::uint64_t>(to_int(method))}));
      const ObjectiveSpec spec{data_moments, omega, &pool, ModelVariant::percolation};
      const Eigen::VectorXd eta = moment_gap(theta0, spec);
      const double alpha = (omega.array() * eta.array().square()).sum();
      const double alpha_tilde = eta.squaredNorm();
      if (method == SamplingMethod::threshold) {
        row.alpha_m1 = alpha;
        row.alpha_tilde_m1 = alpha_tilde;
      } else {
        row.alpha_m2 = alpha;
        row.alpha_tilde_m2 = alpha_tilde;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) {
    throw std::invalid_argument("log spacing needs 0 < lo <= hi and n >= 1");
  }
  std::vector<double> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    out.push_back(std::exp(std::log(lo) + step * i));
  }
  out.back() = hi;
  return out;
}

ScanSpec make_scan_spec(int n_lambda, int n_mu, double lambda_lo, double lambda_hi, double mu_lo,
                        double mu_hi, bool critical_mu_row, LatticeKind kind) {
  ScanSpec spec;
  spec.kind = kind;
  spec.lambdas = log_spaced(lambda_lo, lambda_hi, n_lambda);
  spec.mus = log_spaced(mu_lo, mu_hi, n_mu);
  if (critical_mu_row) {
    const double p_c = critical_probability(kind);
    spec.mus.push_back(p_c);
    std::sort(spec.mus.begin(), spec.mus.end());
    spec.mus.erase(std::unique(spec.mus.begin(), spec.mus.end()), spec.mus.end());
  }
  return spec;
}

std::vector<ScanRow> identifiability_scan(const ScanSpec& spec) {
  if (spec.lambdas.empty() || spec.mus.empty() || spec.n_s < 1) {
    throw std::invalid_argument("scan needs nonempty axes and n_s >= 1");
  }
  for (double l : spec.lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw std::invalid_argument("scan lambda outside [0,1]");
    }
  }
  for (double m : spec.mus) {
    if (!(m >= 0.0 && m <= 0.5)) {
      throw std::invalid_argument("scan mu outside [0,0.5]");
    }
  }
  if (spec.outer_rows <= spec.inner_rows || spec.outer_cols <= spec.inner_cols ||
      spec.inner_rows < 2 || spec.inner_cols < 2) {
    throw std::invalid_argument("central window must be strictly interior to the outer lattice");
  }

  const Lattice lattice(spec.kind, spec.outer_rows, spec.outer_cols);
  const Sublattice window{(spec.outer_rows - spec.inner_rows) / 2,
                          (spec.outer_cols - spec.inner_cols) / 2, spec.inner_rows,
                          spec.inner_cols};

  const int n_lambda = static_cast<int>(spec.lambdas.size());
  const int n_points = n_lambda * static_cast<int>(spec.mus.size());
  std::vector<ScanRow> rows(n_points);
  parallel_for(n_points, spec.n_threads, [&](int idx) {
    const double lambda = spec.lambdas[idx % n_lambda];
    const double mu = spec.mus[idx / n_lambda];
    ParameterVector theta;
    theta.lambdas.resize(1);
    theta.lambdas[0] = lambda;
    theta.mu = mu;

    Eigen::VectorXd m1(spec.n_s);
    Eigen::VectorXd m2(spec.n_s);
    for (int r = 0; r < spec.n_s; ++r) {
      const CrnPool pool(lattice, 1, 1, SamplingMethod::threshold,
                         rng::derive_key({spec.master_seed, kScanRole,
                                          static_cast<std::uint64_t>(idx),
                                          static_cast<std::uint64_t>(r)}));
      const ColourField field = simulate(lattice, theta, pool, 0);
      const auto [v, p] = window_moments(field, window, 0);
      m1[r] = v;
      m2[r] = p;
    }
    ScanRow row;
    row.lambda = lambda;
    row.mu = mu;
    row.m1 = m1.mean();
    row.m2 = m2.mean();
    if (spec.n_s > 1) {
      const double denom = static_cast<double>(spec.n_s - 1) * spec.n_s;
      row.m1_se = std::sqrt((m1.array() - row.m1).square().sum() / denom);
      row.m2_se = std::sqrt((m2.array() - row.m2).square().sum() / denom);
    }
    rows[idx] = row;
  });
  return rows;
}

void write_scan_csv(const std::filesystem::path& path, const ScanSpec& spec,
                    std::span<const ScanRow> rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# moment-surface scan for level-curve rendering\n";
  out << "# outer " << spec.outer_rows << "x" << spec.outer_cols << ", central window "
      << spec.inner_rows << "x" << spec.inner_cols << ", " << to_string(spec.kind) << "\n";
  out << "# replicates per point: " << spec.n_s << ", master_seed " << spec.master_seed << "\n";
  out << "# m1 = window vertex moment, m2 = window adjacent-pair moment\n";
  out << "lambda,mu,m1,m2,m1_se,m2_se\n";
  for (const ScanRow& row : rows) {
    out << fmt(row.lambda) << ',' << fmt(row.mu) << ',' << fmt(row.m1) << ',' << fmt(row.m2)
        << ',' << fmt(row.m1_se) << ',' << fmt(row.m2_se) << '\n';
  }
}

namespace {

std::string ramp_colour(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(30 + t * (255 - 30));
  const int g = static_cast<int>(40 + t * (210 - 40));
  const int b = static_cast<int>(110 + t * (70 - 110));
  char buffer[10];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", r, g, b);
  return buffer;
}

// Marching squares on the grid-index plane; emits one polyline segment list
// per level.
void append_level_curves(std::ofstream& out, const std::vector<std::vector<double>>& value,
                         double level, double cell_w, double cell_h, double x0, double y0) {
  const int ny = static_cast<int>(value.size());
  const int nx = static_cast<int>(value[0].size());
  auto interp = [&](double a, double b) { return (level - a) / (b - a); };
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double v00 = value[j][i], v10 = value[j][i + 1];
      const double v01 = value[j + 1][i], v11 = value[j + 1][i + 1];
      int mask = 0;
      if (v00 >= level) mask |= 1;
      if (v10 >= level) mask |= 2;
      if (v11 >= level) mask |= 4;
      if (v01 >= level) mask |= 8;
      if (mask == 0 || mask == 15) {
        continue;
      }
      // Edge midpoints with linear interpolation; cell corner (i, j).
      const double xl = x0 + i * cell_w;
      const double yb = y0 + j * cell_h;
      auto pt_bottom = [&] { return std::pair{xl + interp(v00, v10) * cell_w, yb}; };
      auto pt_top = [&] { return std::pair{xl + interp(v01, v11) * cell_w, yb + cell_h}; };
      auto pt_left = [&] { return std::pair{xl, yb + interp(v00, v01) * cell_h}; };
      auto pt_right = [&] { return std::pair{xl + cell_w, yb + interp(v10, v11) * cell_h}; };
      std::vector<std::pair<std::pair<double, double>, std::pair<double, double>>> segments;
      switch (mask) {
        case 1: case 14: segments.push_back({pt_left(), pt_bottom()}); break;
        case 2: case 13: segments.push_back({pt_bottom(), pt_right()}); break;
        case 3: case 12: segments.push_back({pt_left(), pt_right()}); break;
        case 4: case 11: segments.push_back({pt_right(), pt_top()}); break;
        case 5:
          segments.push_back({pt_left(), pt_top()});
          segments.push_back({pt_bottom(), pt_right()});
          break;
        case 6: case 9: segments.push_back({pt_bottom(), pt_top()}); break;
        case 7: case 8: segments.push_back({pt_left(), pt_top()}); break;
        case 10:
          segments.push_back({pt_left(), pt_bottom()});
          segments.push_back({pt_right(), pt_top()});
          break;
        default: break;
      }
      for (const auto& [a, b] : segments) {
        out << "<line x1=\"" << a.first << "\" y1=\"" << a.second << "\" x2=\"" << b.first
            << "\" y2=\"" << b.second << "\" stroke=\"white\" stroke-width=\"1\"/>\n";
      }
    }
  }
}

}  // namespace

void write_scan_svg(const std::filesystem::path& path, const ScanSpec& spec,
                    std::span<const ScanRow> rows, int which_moment) {
  if (which_moment != 1 && which_moment != 2) {
    throw std::invalid_argument("which_moment must be 1 or 2");
  }
  const int nx = static_cast<int>(spec.lambdas.size());
  const int ny = static_cast<int>(spec.mus.size());
  if (static_cast<int>(rows.size()) != nx * ny) {
    throw std::invalid_argument("row count does not match the scan grid");
  }

  std::vector<std::vector<double>> value(ny, std::vector<double>(nx));
  double vmin = rows[0].m1, vmax = rows[0].m1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const ScanRow& row = rows[static_cast<std::size_t>(j) * nx + i];
      const double v = which_moment == 1 ? row.m1 : row.m2;
      value[j][i] = v;
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  const double span = vmax > vmin ? vmax - vmin : 1.0;

  const double margin = 60.0;
  const double cell = 40.0;
  const double width = margin * 2 + cell * nx;
  const double height = margin * 2 + cell * ny;

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<text x=\"" << margin << "\" y=\"30\" font-size=\"16\">"
      << (which_moment == 1 ? "vertex moment" : "adjacent-pair moment")
      << " over (lambda, mu)</text>\n";
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double t = (value[j][i] - vmin) / span;
      // mu grows downwards on screen
      const double x = margin + i * cell;
      const double y = height - margin - (j + 1) * cell;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"" << ramp_colour(t) << "\"/>\n";
    }
  }
  // Level curves in a flipped-y group so the index plane matches the cells.
  out << "<g transform=\"translate(" << margin + cell / 2 << "," << height - margin - cell / 2
      << ") scale(1,-1)\">\n";
  for (int level_idx = 1; level_idx <= 8; ++level_idx) {
    const double level = vmin + span * level_idx / 9.0;
    append_level_curves(out, value, level, cell, cell, 0.0, 0.0);
  }
  out << "</g>\n";
  for (int i = 0; i < nx; ++i) {
    out << "<text x=\"" << margin + i * cell + 4 << "\" y=\"" << height - margin + 16
        << "\" font-size=\"9\">" << spec.lambdas[i] << "</text>\n";
  }
  for (int j = 0; j < ny; ++j) {
    out << "<text x=\"6\" y=\"" << height - margin - j * cell - cell / 2 << "\" font-size=\"9\">"
        << spec.mus[j] << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"12\">lambda</text>\n";
  out << "<text x=\"14\" y=\"" << height / 2 << "\" font-size=\"12\">mu</text>\n";
  out << "</svg>\n";
}

void write_convergence_csv(const std::filesystem::path& path, const ParameterVector& theta0,
                           int n_s, std::uint64_t study_seed,
                           std::span<const ConvergenceRow> rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# objective value at the true parameter across lattice sizes\n";
  out << "# theta0 = " << fmt_vector(theta0.lambdas) << " " << fmt(theta0.mu) << ", n_s = " << n_s
      << ", study_seed " << study_seed << "\n";
  out << "# alpha uses data-moment weights; alpha_tilde is the unweighted form\n";
  out << "rows,cols,n_vertices,n_pairs,alpha_m1,alpha_m2,alpha_tilde_m1,alpha_tilde_m2\n";
  for (const ConvergenceRow& row : rows) {
    out << row.rows << ',' << row.cols << ',' << row.n_vertices << ',' << row.n_pairs << ','
        << fmt(row.alpha_m1) << ',' << fmt(row.alpha_m2) << ',' << fmt(row.alpha_tilde_m1) << ','
        << fmt(row.alpha_tilde_m2) << '\n';
  }
}

void write_table_csv(const std::filesystem::path& path, const TableReport& report) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  const int n = report.theta0.colour_count();
  out << "# synthetic-data estimation experiment\n";
  out << "# lattice " << to_string(report.kind) << " " << report.rows << "x" << report.cols
      << ", dataset_seed " << report.dataset_seed << "\n";
  out << "# theta0 = " << fmt_vector(report.theta0.lambdas) << " " << fmt(report.theta0.mu)
      << "\n";
  out << "# seeding frequency = " << fmt_vector(report.seed_frequency) << "\n";
  out << "# observed frequency = " << fmt_vector(report.observed_frequency) << "\n";
  out << "# open-edge frequency = " << fmt(report.open_edge_frequency) << "\n";
  out << "n_s,n_opt,mu_max,method,coordinate,theta0,theta_hat,bias_percent,alpha\n";
  for (const TableRow& row : report.results) {
    for (const MethodOutcome* outcome : {&row.outcome_m1, &row.outcome_m2}) {
      for (int l = 0; l <= n; ++l) {
        const double truth = l < n ? report.theta0.lambdas[l] : report.theta0.mu;
        const double estimate =
            l < n ? outcome->theta_hat.lambdas[l] : outcome->theta_hat.mu;
        out << row.config.n_s << ',' << row.config.n_opt << ',' << fmt(row.config.mu_max) << ','
            << to_int(outcome->method) << ','
            << (l < n ? "lambda" + std::to_string(l + 1) : std::string("mu")) << ',' << fmt(truth)
            << ',' << fmt(estimate) << ',' << fmt(outcome->bias_percent[l]) << ','
            << fmt(outcome->alpha) << '\n';
      }
    }
  }
}

void write_alpha_csv(const std::filesystem::path& path, const ParameterVector& theta0,
                     const EstimationConfig& config, std::span<const AlphaComparisonRow> rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# objective comparison: true parameter vs trivial vs MSM estimate\n";
  out << "# theta0 = " << fmt_vector(theta0.lambdas) << " " << fmt(theta0.mu) << ", n_s = "
      << config.n_s << ", n_opt = " << config.n_opt << ", mu_max = " << fmt(config.mu_max)
      << ", master_seed " << config.master_seed << "\n";
  out << "method,alpha_theta0,alpha_trivial,alpha_theta_hat\n";
  for (const AlphaComparisonRow& row : rows) {
    out << to_int(row.method) << ',' << fmt(row.alpha_theta0) << ',' << fmt(row.alpha_trivial)
        << ',' << fmt(row.alpha_theta_hat) << '\n';
  }
}

}  // namespace percmsm
