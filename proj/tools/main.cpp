#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "percmsm/errors.hpp"
#include "percmsm/field_io.hpp"
#include "percmsm/moments.hpp"
#include "percmsm/studies.hpp"

namespace fs = std::filesystem;
using namespace percmsm;

namespace {

constexpr int kExitInvalidInput = 2;
constexpr int kExitDegenerateData = 3;
constexpr int kExitNotConverged = 4;

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw ParseError(message);
  }
}

int cmd_simulate(const RunConfig& config, const fs::path& out_dir) {
  require(config.theta0.has_value(), "simulate needs theta0 in the config");
  require(config.rows >= 1 && config.cols >= 1, "simulate needs rows and cols");
  const Lattice lattice(config.kind, config.rows, config.cols);
  const GeneratedDataset dataset =
      generate_synthetic_dataset(lattice, *config.theta0, config.master_seed, config.variant);

  fs::create_directories(out_dir);
  FieldFileMeta meta;
  meta.theta0 = *config.theta0;
  meta.seed = config.master_seed;
  meta.method = 1;
  write_field_file(out_dir / "field.txt", dataset.field, meta);
  write_dataset_summary(out_dir / "field_summary.txt", dataset, *config.theta0, lattice);
  std::cout << "wrote " << (out_dir / "field.txt").string() << " and field_summary.txt\n";
  return 0;
}

int cmd_estimate(const RunConfig& config, const fs::path& field_path, const fs::path& out_dir) {
  const LoadedField loaded = read_field_file(field_path);
  std::optional<ParameterVector> theta0 = loaded.meta().theta0;
  if (!theta0) {
    theta0 = config.theta0;
  }

  std::vector<SamplingMethod> methods;
  if (config.both_methods) {
    methods = {SamplingMethod::threshold, SamplingMethod::exact_count};
  } else {
    methods = {sampling_method_from_int(config.method)};
  }

  fs::create_directories(out_dir);
  bool all_converged = true;
  for (SamplingMethod method : methods) {
    EstimationConfig cfg = estimation_config_from(config);
    cfg.method = method;
    const EstimationResult result = estimate_msm(loaded.field(), cfg);
    all_converged = all_converged && result.converged;
    const fs::path path =
        out_dir / ("estimate_method" + std::to_string(to_int(method)) + ".txt");
    write_estimation_result(path, result, theta0);
    std::cout << "method " << to_int(method) << ": alpha " << result.alpha_value << ", wrote "
              << path.string() << "\n";
  }
  return all_converged ? 0 : kExitNotConverged;
}

int cmd_abc(const RunConfig& config, const fs::path& field_path, double epsilon, int draws,
            const fs::path& out_dir) {
  require(config.prior_lower.has_value() && config.prior_upper.has_value(),
          "abc needs prior_lower and prior_upper in the config");
  const LoadedField loaded = read_field_file(field_path);

  AbcConfig abc;
  abc.prior_lower = *config.prior_lower;
  abc.prior_upper = *config.prior_upper;
  abc.epsilon = epsilon > 0.0 ? epsilon : config.epsilon;
  abc.n_draws = draws > 0 ? draws : config.draws;
  abc.seed = config.master_seed;
  abc.variant = config.variant;
  const AbcResult result = abc_rejection(loaded.field(), abc);

  fs::create_directories(out_dir);
  write_abc_samples_csv(out_dir / "abc_accepted.csv", result);
  write_abc_summary(out_dir / "abc_summary.txt", abc, result);
  std::cout << "accepted " << result.accepted.size() << " of " << result.n_draws << " draws (rate "
            << result.acceptance_rate << ")\n";
  return 0;
}

int cmd_moments(double lambda, std::optional<double> lambda2, double mu,
                const std::string& variant_name, int degree) {
  model_variant_from_string(variant_name);  // reject unknown names
  std::printf("variant %s, degree %d\n", variant_name.c_str(), degree);
  std::printf("first_moment %.17g\n", confined_first_moment(lambda, mu, degree));
  if (lambda2) {
    std::printf("cross_colour_moment %.17g\n",
                confined_cross_colour_moment(lambda, *lambda2, mu, degree));
  }
  if (lambda <= 0.2 && mu <= 0.2) {
    std::printf("pair_moment_series %.17g\n", confined_pair_moment(lambda, mu));
  } else {
    std::printf("pair_moment_series outside the trusted [0,0.2] envelope\n");
  }
  return 0;
}

int cmd_study(const RunConfig& config, const std::string& study_id, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  if (study_id == "table") {
    require(config.theta0.has_value(), "table study needs theta0");
    require(config.rows >= 1 && config.cols >= 1, "table study needs rows and cols");
    EstimationConfig cfg = estimation_config_from(config);
    cfg.n_threads = config.n_threads;
    const std::vector<EstimationConfig> configs{cfg};
    const TableReport report = run_table_experiment(*config.theta0, config.kind, config.rows,
                                                    config.cols, configs, config.master_seed);
    write_table_csv(out_dir / "table.csv", report);
    for (const TableRow& row : report.results) {
      std::cerr << "n_s=" << row.config.n_s << " method1 " << row.outcome_m1.seconds
                << "s, method2 " << row.outcome_m2.seconds << "s\n";
    }
    std::cout << "wrote " << (out_dir / "table.csv").string() << "\n";
    return 0;
  }
  if (study_id == "alpha") {
    require(config.theta0.has_value(), "alpha study needs theta0");
    require(config.rows >= 1 && config.cols >= 1, "alpha study needs rows and cols");
    const Lattice lattice(config.kind, config.rows, config.cols);
    const GeneratedDataset dataset = generate_synthetic_dataset(
        lattice, *config.theta0, rng::derive_key({config.master_seed, 0x11}));
    const EstimationConfig cfg = estimation_config_from(config);
    const auto rows = alpha_comparison(*config.theta0, dataset.field, cfg);
    write_alpha_csv(out_dir / "alpha_comparison.csv", *config.theta0, cfg, rows);
    std::cout << "wrote " << (out_dir / "alpha_comparison.csv").string() << "\n";
    return 0;
  }
  if (study_id == "convergence") {
    require(config.theta0.has_value(), "convergence study needs theta0");
    require(!config.sizes.empty(), "convergence study needs sizes");
    std::vector<std::pair<int, int>> sizes;
    for (int s : config.sizes) {
      sizes.emplace_back(s, s);
    }
    const auto rows =
        convergence_study(*config.theta0, config.kind, sizes, config.n_s, config.master_seed);
    write_convergence_csv(out_dir / "convergence.csv", *config.theta0, config.n_s,
                          config.master_seed, rows);
    std::cout << "wrote " << (out_dir / "convergence.csv").string() << "\n";
    return 0;
  }
  if (study_id == "scan") {
    ScanSpec spec = make_scan_spec(config.scan_n_lambda, config.scan_n_mu, config.scan_lambda_lo,
                                   config.scan_lambda_hi, config.scan_mu_lo, config.scan_mu_hi,
                                   config.scan_critical_row, config.kind);
    spec.outer_rows = config.outer_rows;
    spec.outer_cols = config.outer_cols;
    spec.inner_rows = config.inner_rows;
    spec.inner_cols = config.inner_cols;
    spec.n_s = config.n_s;
    spec.master_seed = config.master_seed;
    spec.n_threads = config.n_threads;
    const auto rows = identifiability_scan(spec);
    write_scan_csv(out_dir / "scan.csv", spec, rows);
    write_scan_svg(out_dir / "scan_m1.svg", spec, rows, 1);
    write_scan_svg(out_dir / "scan_m2.svg", spec, rows, 2);
    std::cout << "wrote scan.csv, scan_m1.svg, scan_m2.svg under " << out_dir.string() << "\n";
    return 0;
  }
  throw ParseError("unknown study id '" + study_id + "' (table, alpha, convergence, scan)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coloured bond-percolation simulator and moment-based parameter estimation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string field_path;
  std::string out_dir = ".";
  std::string study_id;
  std::string variant_name = "confined";
  std::optional<std::uint64_t> seed_override;
  std::optional<int> method_override;
  bool method_both = false;
  double epsilon = 0.0;
  int draws = 0;
  double lambda = 0.0;
  double mu = 0.0;
  std::optional<double> lambda2;
  int degree = 6;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "run configuration file");
    if (needs_config) {
      opt->required();
    }
    cmd->add_option("--seed", seed_override, "override master_seed");
    cmd->add_option("--out", out_dir, "output directory");
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic colour field");
  add_common(simulate_cmd, true);

  auto* estimate_cmd = app.add_subcommand("estimate", "estimate theta from a field file");
  add_common(estimate_cmd, true);
  estimate_cmd->add_option("--field", field_path, "field file")->required();
  estimate_cmd->add_option("--method", method_override, "sampling method 1 or 2");
  estimate_cmd->add_flag("--both", method_both, "run both sampling methods");

  auto* abc_cmd = app.add_subcommand("abc", "rejection sampling from the prior box");
  add_common(abc_cmd, true);
  abc_cmd->add_option("--field", field_path, "field file")->required();
  abc_cmd->add_option("--epsilon", epsilon, "acceptance threshold");
  abc_cmd->add_option("--draws", draws, "number of prior draws");

  auto* moments_cmd = app.add_subcommand("moments", "print confined-model moment oracles");
  moments_cmd->add_option("--lambda", lambda, "seeding probability")->required();
  moments_cmd->add_option("--lambda2", lambda2, "second colour seeding probability");
  moments_cmd->add_option("--mu", mu, "edge probability")->required();
  moments_cmd->add_option("--variant", variant_name, "confined or confined-directed");
  moments_cmd->add_option("--degree", degree, "interior degree, 4 or 6");

  auto* study_cmd = app.add_subcommand("study", "run a study driver");
  add_common(study_cmd, true);
  study_cmd->add_option("--id", study_id, "table, alpha, convergence or scan")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (moments_cmd->parsed()) {
      return cmd_moments(lambda, lambda2, mu, variant_name, degree);
    }
    RunConfig config = load_run_config(config_path);
    if (seed_override) {
      config.master_seed = *seed_override;
    }
    if (method_override) {
      config.method = *method_override;
      config.both_methods = false;
    }
    if (method_both) {
      config.both_methods = true;
    }
    if (config.method != 1 && config.method != 2) {
      throw ParseError("method must be 1 or 2");
    }

    if (simulate_cmd->parsed()) {
      return cmd_simulate(config, out_dir);
    }
    if (estimate_cmd->parsed()) {
      return cmd_estimate(config, field_path, out_dir);
    }
    if (abc_cmd->parsed()) {
      return cmd_abc(config, field_path, epsilon, draws, out_dir);
    }
    if (study_cmd->parsed()) {
      return cmd_study(config, study_id, out_dir);
    }
  } catch (const DegenerateDataError& error) {
    std::cerr << "degenerate data: " << error.what() << "\n";
    return kExitDegenerateData;
  } catch (const ParseError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
