#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "percmsm/estimator.hpp"
#include "percmsm/percolation.hpp"

namespace percmsm {

// Optional generator provenance carried in a field file header.
struct FieldFileMeta {
  std::optional<ParameterVector> theta0;
  std::optional<std::uint64_t> seed;
  std::optional<int> method;
};

// Text format: header key-value lines (kind, rows, cols, colours, optional
// theta0/seed/method), a lone "data" line, then rows lines of cols
// space-separated bitmasks in 0..2^n_c-1.
void write_field_file(const std::filesystem::path& path, const ColourField& field,
                      const FieldFileMeta& meta = {});

// Owns the lattice its field refers to.
class LoadedField {
 public:
  LoadedField(std::unique_ptr<Lattice> lattice, ColourField field, FieldFileMeta meta)
      : lattice_(std::move(lattice)), field_(std::move(field)), meta_(std::move(meta)) {}

  const Lattice& lattice() const { return *lattice_; }
  const ColourField& field() const { return field_; }
  const FieldFileMeta& meta() const { return meta_; }

 private:
  std::unique_ptr<Lattice> lattice_;
  ColourField field_;
  FieldFileMeta meta_;
};

LoadedField read_field_file(const std::filesystem::path& path);

// Key-value run configuration shared by the command-line front end.
struct RunConfig {
  LatticeKind kind = LatticeKind::triangular;
  int rows = 0;
  int cols = 0;
  int n_colours = 0;
  std::optional<ParameterVector> theta0;
  int n_s = 10;
  int n_opt = 5;
  double mu_max = 0.1;
  int method = 1;
  bool both_methods = false;
  std::uint64_t master_seed = 1;
  ModelVariant variant = ModelVariant::percolation;
  int max_evaluations = 0;
  int n_threads = 0;
  // convergence study
  std::vector<int> sizes;
  // identifiability scan
  int scan_n_lambda = 10;
  int scan_n_mu = 10;
  double scan_lambda_lo = 0.005;
  double scan_lambda_hi = 0.4;
  double scan_mu_lo = 0.005;
  double scan_mu_hi = 0.45;
  bool scan_critical_row = true;
  int outer_rows = 300;
  int outer_cols = 300;
  int inner_rows = 100;
  int inner_cols = 100;
  // abc
  std::optional<ParameterVector> prior_lower;
  std::optional<ParameterVector> prior_upper;
  double epsilon = 0.0;
  int draws = 0;
};

RunConfig load_run_config(const std::filesystem::path& path);

EstimationConfig estimation_config_from(const RunConfig& config);

void write_dataset_summary(const std::filesystem::path& path, const GeneratedDataset& dataset,
                           const ParameterVector& theta0, const Lattice& lattice);
void write_estimation_result(const std::filesystem::path& path, const EstimationResult& result,
                             const std::optional<ParameterVector>& theta0);
void write_abc_samples_csv(const std::filesystem::path& path, const AbcResult& result);
void write_abc_summary(const std::filesystem::path& path, const AbcConfig& config,
                       const AbcResult& result);

}  // namespace percmsm
