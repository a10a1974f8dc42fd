#include "percmsm/field_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "percmsm/errors.hpp"
#include "percmsm/studies.hpp"

namespace percmsm {

namespace {

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

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return s.substr(b, e - b);
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::istringstream in(s);
  std::string word;
  while (in >> word) {
    words.push_back(word);
  }
  return words;
}

[[noreturn]] void fail(const std::filesystem::path& path, int line, const std::string& message) {
  throw ParseError(path.string() + ", line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::filesystem::path& path, int line, const std::string& token) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) {
      fail(path, line, "malformed number '" + token + "'");
    }
    return value;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    fail(path, line, "malformed number '" + token + "'");
  }
}

std::int64_t parse_int(const std::filesystem::path& path, int line, const std::string& token) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail(path, line, "malformed integer '" + token + "'");
  }
  return value;
}

std::uint64_t parse_uint(const std::filesystem::path& path, int line, const std::string& token) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail(path, line, "malformed unsigned integer '" + token + "'");
  }
  return value;
}

ParameterVector parse_theta(const std::filesystem::path& path, int line,
                            const std::vector<std::string>& tokens) {
  if (tokens.size() < 2) {
    fail(path, line, "parameter vector needs at least one lambda and mu");
  }
  ParameterVector theta;
  theta.lambdas.resize(static_cast<Eigen::Index>(tokens.size()) - 1);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    theta.lambdas[static_cast<Eigen::Index>(i)] = parse_double(path, line, tokens[i]);
  }
  theta.mu = parse_double(path, line, tokens.back());
  return theta;
}

}  // namespace

void write_field_file(const std::filesystem::path& path, const ColourField& field,
                      const FieldFileMeta& meta) {
  if (field.lattice == nullptr) {
    throw std::invalid_argument("field has no lattice");
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  const Lattice& lattice = *field.lattice;
  out << "# coloured lattice field\n";
  out << "kind " << to_string(lattice.kind()) << "\n";
  out << "rows " << lattice.rows() << "\n";
  out << "cols " << lattice.cols() << "\n";
  out << "colours " << field.n_colours << "\n";
  if (meta.theta0) {
    out << "theta0 " << fmt_vector(meta.theta0->lambdas) << ' ' << fmt(meta.theta0->mu) << "\n";
  }
  if (meta.seed) {
    out << "seed " << *meta.seed << "\n";
  }
  if (meta.method) {
    out << "method " << *meta.method << "\n";
  }
  out << "data\n";
  for (int r = 0; r < lattice.rows(); ++r) {
    for (int c = 0; c < lattice.cols(); ++c) {
      if (c > 0) {
        out << ' ';
      }
      out << field.masks[static_cast<std::size_t>(r) * lattice.cols() + c];
    }
    out << '\n';
  }
}

LoadedField read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::string line;
  int line_no = 0;
  std::optional<LatticeKind> kind;
  int rows = -1;
  int cols = -1;
  int colours = -1;
  FieldFileMeta meta;
  std::optional<std::pair<int, std::vector<std::string>>> theta_tokens;

  bool in_header = true;
  while (in_header && std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') {
      continue;
    }
    const auto words = split_words(text);
    if (words[0] == "data") {
      in_header = false;
      break;
    }
    if (words.size() < 2) {
      fail(path, line_no, "header entry '" + words[0] + "' has no value");
    }
    const std::vector<std::string> values(words.begin() + 1, words.end());
    if (words[0] == "kind") {
      kind = lattice_kind_from_string(values[0]);
    } else if (words[0] == "rows") {
      rows = static_cast<int>(parse_int(path, line_no, values[0]));
    } else if (words[0] == "cols") {
      cols = static_cast<int>(parse_int(path, line_no, values[0]));
    } else if (words[0] == "colours") {
      colours = static_cast<int>(parse_int(path, line_no, values[0]));
    } else if (words[0] == "theta0") {
      theta_tokens = {line_no, values};
    } else if (words[0] == "seed") {
      meta.seed = parse_uint(path, line_no, values[0]);
    } else if (words[0] == "method") {
      meta.method = static_cast<int>(parse_int(path, line_no, values[0]));
    } else {
      fail(path, line_no, "unknown header key '" + words[0] + "'");
    }
  }
  if (in_header) {
    fail(path, line_no, "missing 'data' line");
  }
  if (!kind || rows < 1 || cols < 1 || colours < 1) {
    fail(path, line_no, "header must set kind, rows >= 1, cols >= 1 and colours >= 1");
  }
  if (colours > kMaxColours) {
    fail(path, line_no, "colour count exceeds " + std::to_string(kMaxColours));
  }
  if (theta_tokens) {
    const ParameterVector theta = parse_theta(path, theta_tokens->first, theta_tokens->second);
    if (theta.colour_count() != colours) {
      fail(path, theta_tokens->first, "theta0 must list one lambda per colour plus mu");
    }
    meta.theta0 = theta;
  }

  auto lattice = std::make_unique<Lattice>(*kind, rows, cols);
  ColourField field{lattice.get(), colours,
                    std::vector<ColourMask>(static_cast<std::size_t>(rows) * cols, 0)};
  const auto limit = ColourMask{1} << colours;
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      fail(path, line_no, "body ends early: expected " + std::to_string(rows) + " data rows");
    }
    ++line_no;
    const auto words = split_words(trim(line));
    if (static_cast<int>(words.size()) != cols) {
      fail(path, line_no,
           "expected " + std::to_string(cols) + " values, found " + std::to_string(words.size()));
    }
    for (int c = 0; c < cols; ++c) {
      const std::int64_t value = parse_int(path, line_no, words[c]);
      if (value < 0 || value >= static_cast<std::int64_t>(limit)) {
        throw ParseError(path.string() + ", line " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + ": mask " + std::to_string(value) +
                         " outside 0..2^" + std::to_string(colours) + "-1");
      }
      field.masks[static_cast<std::size_t>(r) * cols + c] = static_cast<ColourMask>(value);
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      fail(path, line_no, "trailing content after the data body");
    }
  }
  return LoadedField(std::move(lattice), std::move(field), std::move(meta));
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  RunConfig config;
  std::string line;
  int line_no = 0;
  std::optional<std::pair<int, std::vector<std::string>>> theta_tokens;
  std::optional<std::pair<int, std::vector<std::string>>> prior_lo_tokens;
  std::optional<std::pair<int, std::vector<std::string>>> prior_hi_tokens;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') {
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      fail(path, line_no, "expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const auto words = split_words(value);
    if (words.empty()) {
      fail(path, line_no, "key '" + key + "' has no value");
    }

    if (key == "kind") {
      config.kind = lattice_kind_from_string(words[0]);
    } else if (key == "rows") {
      config.rows = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "cols") {
      config.cols = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "colours") {
      config.n_colours = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "theta0") {
      theta_tokens = {line_no, words};
    } else if (key == "n_s") {
      config.n_s = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "n_opt") {
      config.n_opt = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "mu_max") {
      config.mu_max = parse_double(path, line_no, words[0]);
    } else if (key == "method") {
      if (words[0] == "both") {
        config.both_methods = true;
      } else {
        config.method = static_cast<int>(parse_int(path, line_no, words[0]));
      }
    } else if (key == "master_seed") {
      config.master_seed = parse_uint(path, line_no, words[0]);
    } else if (key == "variant") {
      config.variant = model_variant_from_string(words[0]);
    } else if (key == "max_evaluations") {
      config.max_evaluations = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "n_threads") {
      config.n_threads = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "sizes") {
      config.sizes.clear();
      for (const std::string& word : words) {
        config.sizes.push_back(static_cast<int>(parse_int(path, line_no, word)));
      }
    } else if (key == "scan_n_lambda") {
      config.scan_n_lambda = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "scan_n_mu") {
      config.scan_n_mu = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "scan_lambda_lo") {
      config.scan_lambda_lo = parse_double(path, line_no, words[0]);
    } else if (key == "scan_lambda_hi") {
      config.scan_lambda_hi = parse_double(path, line_no, words[0]);
    } else if (key == "scan_mu_lo") {
      config.scan_mu_lo = parse_double(path, line_no, words[0]);
    } else if (key == "scan_mu_hi") {
      config.scan_mu_hi = parse_double(path, line_no, words[0]);
    } else if (key == "scan_critical_row") {
      config.scan_critical_row = words[0] == "true" || words[0] == "1";
    } else if (key == "outer_rows") {
      config.outer_rows = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "outer_cols") {
      config.outer_cols = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "inner_rows") {
      config.inner_rows = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "inner_cols") {
      config.inner_cols = static_cast<int>(parse_int(path, line_no, words[0]));
    } else if (key == "prior_lower") {
      prior_lo_tokens = {line_no, words};
    } else if (key == "prior_upper") {
      prior_hi_tokens = {line_no, words};
    } else if (key == "epsilon") {
      config.epsilon = parse_double(path, line_no, words[0]);
    } else if (key == "draws") {
      config.draws = static_cast<int>(parse_int(path, line_no, words[0]));
    } else {
      fail(path, line_no, "unknown key '" + key + "'");
    }
  }

  if (theta_tokens) {
    config.theta0 = parse_theta(path, theta_tokens->first, theta_tokens->second);
    if (config.n_colours == 0) {
      config.n_colours = config.theta0->colour_count();
    }
  }
  if (prior_lo_tokens) {
    config.prior_lower = parse_theta(path, prior_lo_tokens->first, prior_lo_tokens->second);
  }
  if (prior_hi_tokens) {
    config.prior_upper = parse_theta(path, prior_hi_tokens->first, prior_hi_tokens->second);
  }

  // Module preconditions enforced at load time.
  const double p_c = critical_probability(config.kind);
  if (config.theta0) {
    validate_probabilities(*config.theta0);
    if (config.n_colours != config.theta0->colour_count()) {
      throw ParseError(path.string() + ": theta0 lists " +
                       std::to_string(config.theta0->colour_count()) + " colours but colours = " +
                       std::to_string(config.n_colours));
    }
  }
  if (!(config.mu_max > 0.0 && config.mu_max < p_c)) {
    throw ParseError(path.string() + ": mu_max = " + fmt(config.mu_max) +
                     " must lie in (0, p_c = " + fmt(p_c) +
                     "); estimation is restricted to subcritical contamination");
  }
  if (config.method != 1 && config.method != 2) {
    throw ParseError(path.string() + ": method must be 1, 2 or both");
  }
  if (config.prior_lower) {
    validate_probabilities(*config.prior_lower);
  }
  if (config.prior_upper) {
    validate_probabilities(*config.prior_upper);
    if (!(config.prior_upper->mu < p_c)) {
      throw ParseError(path.string() +
                       ": prior_upper mu must stay below p_c (subcritical regime)");
    }
  }
  return config;
}

EstimationConfig estimation_config_from(const RunConfig& config) {
  EstimationConfig out;
  out.n_s = config.n_s;
  out.n_opt = config.n_opt;
  out.mu_max = config.mu_max;
  out.method = sampling_method_from_int(config.method);
  out.variant = config.variant;
  out.master_seed = config.master_seed;
  out.optimizer.max_evaluations = config.max_evaluations;
  out.n_threads = config.n_threads;
  return out;
}

void write_dataset_summary(const std::filesystem::path& path, const GeneratedDataset& dataset,
                           const ParameterVector& theta0, const Lattice& lattice) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# synthetic dataset summary\n";
  out << "kind " << to_string(lattice.kind()) << "\n";
  out << "rows " << lattice.rows() << "\n";
  out << "cols " << lattice.cols() << "\n";
  out << "n_vertices " << lattice.vertex_count() << "\n";
  out << "n_pairs " << lattice.edge_count() << "\n";
  out << "seed " << dataset.seed << "\n";
  out << "theta0 " << fmt_vector(theta0.lambdas) << ' ' << fmt(theta0.mu) << "\n";
  out << "seed_frequency " << fmt_vector(dataset.seed_frequency) << "\n";
  out << "observed_frequency " << fmt_vector(dataset.observed_frequency) << "\n";
  out << "open_edge_frequency " << fmt(dataset.open_edge_frequency) << "\n";
}

void write_estimation_result(const std::filesystem::path& path, const EstimationResult& result,
                             const std::optional<ParameterVector>& theta0) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# estimation result\n";
  out << "method " << to_int(result.config.method) << "\n";
  out << "variant " << to_string(result.config.variant) << "\n";
  out << "n_s " << result.config.n_s << "\n";
  out << "n_opt " << result.config.n_opt << "\n";
  out << "mu_max " << fmt(result.config.mu_max) << "\n";
  out << "master_seed " << result.config.master_seed << "\n";
  out << "n_vertices " << result.data_moments.n_vertices << "\n";
  out << "n_pairs " << result.data_moments.n_pairs << "\n";
  out << "data_ybar " << fmt_vector(result.data_moments.ybar) << "\n";
  out << "data_zbar " << fmt_vector(result.data_moments.zbar) << "\n";
  out << "theta_hat " << fmt_vector(result.theta_hat.lambdas) << ' ' << fmt(result.theta_hat.mu)
      << "\n";
  out << "alpha " << fmt(result.alpha_value) << "\n";
  out << "converged " << (result.converged ? 1 : 0) << "\n";
  if (theta0) {
    const Eigen::VectorXd bias = relative_bias_percent(result.theta_hat, *theta0);
    out << "theta0 " << fmt_vector(theta0->lambdas) << ' ' << fmt(theta0->mu) << "\n";
    out << "bias_percent " << fmt_vector(bias) << "\n";
  }
  out << "# start <k> <initial theta> -> <final theta> alpha <value> evaluations <n> converged\n";
  for (std::size_t k = 0; k < result.starts.size(); ++k) {
    const StartRecord& start = result.starts[k];
    out << "start " << k + 1 << ' ' << fmt_vector(start.initial.lambdas) << ' '
        << fmt(start.initial.mu) << " -> " << fmt_vector(start.final_point.lambdas) << ' '
        << fmt(start.final_point.mu) << " alpha " << fmt(start.alpha) << " evaluations "
        << start.evaluations << ' ' << (start.converged ? 1 : 0) << "\n";
  }
}

void write_abc_samples_csv(const std::filesystem::path& path, const AbcResult& result) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# accepted parameter draws\n";
  const int n_colours =
      result.accepted.empty() ? 0 : result.accepted.front().colour_count();
  for (int l = 1; l <= n_colours; ++l) {
    out << "lambda" << l << ',';
  }
  out << "mu,alpha\n";
  for (std::size_t k = 0; k < result.accepted.size(); ++k) {
    const ParameterVector& theta = result.accepted[k];
    for (int l = 0; l < theta.colour_count(); ++l) {
      out << fmt(theta.lambdas[l]) << ',';
    }
    out << fmt(theta.mu) << ',' << fmt(result.accepted_alpha[k]) << '\n';
  }
}

void write_abc_summary(const std::filesystem::path& path, const AbcConfig& config,
                       const AbcResult& result) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# rejection-sampling summary\n";
  out << "epsilon " << fmt(config.epsilon) << "\n";
  out << "draws " << result.n_draws << "\n";
  out << "seed " << config.seed << "\n";
  out << "variant " << to_string(config.variant) << "\n";
  out << "prior_lower " << fmt_vector(config.prior_lower.lambdas) << ' '
      << fmt(config.prior_lower.mu) << "\n";
  out << "prior_upper " << fmt_vector(config.prior_upper.lambdas) << ' '
      << fmt(config.prior_upper.mu) << "\n";
  out << "accepted " << result.accepted.size() << "\n";
  out << "acceptance_rate " << fmt(result.acceptance_rate) << "\n";
}

}  // namespace percmsm
