#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trotkit/hamiltonian.hpp"
#include "trotkit/stats.hpp"

namespace trotkit {

inline constexpr const char* kVersion = "0.1.0";

/// invalid or unknown configuration; the CLI maps this to exit code 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// a requested size exceeds a numeric limit; the CLI maps this to exit code 3
struct NumericLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  std::string name;  // "qimf" or "heisenberg"
  double h_x = 0, h_y = 0, J = 0, h = 0;
  std::string label;

  HamiltonianSpec build(int n_qubits) const;
};

struct ExperimentConfig {
  std::string experiment;
  ModelParams model;
  int n_qubits = 0;
  int pf_order = 1;
  double dt = 0.01;
  std::vector<double> times;
  int r = 1;
  int samples = 2000;
  int bootstrap_resamples = 1000;
  double bootstrap_level = 0.95;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int workers = 1;
  std::string error_convention = "half";  // or "full"
  bool save_raw_samples = false;

  // kurtosis_vs_magic
  std::vector<int> k_list;

  // joint_lc
  ModelParams atypical_model;
  double t_ll = 0.0, t_hh = 3.9, t_lh = 0.4;

  // resource_growth
  std::vector<ModelParams> presets;

  // long_time
  ModelParams prep_model;
  bool check_triangle = false;
  bool theorem3_bound = false;

  ErrorConvention convention() const {
    return error_convention == "full" ? ErrorConvention::kFullCommutator
                                      : ErrorConvention::kHalfCommutator;
  }
};

/// Parses a config file (JSON, or the flat TOML subset with [section] and
/// [[array-of-table]] headers). Unknown fields are rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& json_text);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<int> samples_override;
};

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& ov);

struct ExperimentResult {
  std::string csv_path;
  std::string json_path;
  std::string csv_text;  // exact bytes written to csv_path
};

ExperimentResult run_variance_vs_time(const ExperimentConfig& cfg);
ExperimentResult run_kurtosis_vs_magic(const ExperimentConfig& cfg);
ExperimentResult run_joint_lc(const ExperimentConfig& cfg);
ExperimentResult run_resource_growth(const ExperimentConfig& cfg);
ExperimentResult run_long_time(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// fixed "%.17g" formatting used in all CSV output
std::string format_double(double v);

}  // namespace trotkit
