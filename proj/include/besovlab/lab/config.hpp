#pragma once

// Experiment configuration: a flat text file of dotted key=value lines with
// '#' comments. Every key has a default; unknown keys are rejected.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "besovlab/kernels.hpp"

namespace besovlab::lab {

/// Malformed or out-of-range configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct WeightCase {
  int m = 0;
  double a = 0.0;
};

struct ExperimentConfig {
  // grid
  int dim = 1;
  int samples = 512;
  double length = 16.0;
  // t quadrature; t_min/t_max <= 0 select the module defaults
  double rho = 1.05;
  double t_min = 0.0;
  double t_max = 0.0;
  // family
  int family_count = 10;
  std::uint64_t seed = 1;
  int max_mode = 0;  // 0 selects N/8
  bool mean_zero = false;
  // trace-ratios
  std::vector<WeightCase> trace_cases{{1, 0.0}, {2, 0.0}, {2, 0.5}, {1, -0.5}};
  kernels::KernelKind kind = kernels::KernelKind::GaussWeierstrass;
  std::vector<WeightCase> p_cases{{0, 0.0}};
  double p = 2.0;
  std::vector<double> dilations{0.5, 2.0};
  std::vector<double> trace_times{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512, 1.0 / 1024};
  // identities
  int identity_samples_1d = 1024;
  int identity_samples_2d = 256;
  std::vector<double> identity_times{0.25, 1.0, 4.0};
  // lift
  int mironescu_m = 1;
  int lift_m = 2;
  double lift_a = 0.0;
  std::vector<double> lift_ls{16, 32, 64, 128, 256};
  std::vector<WeightCase> normal_cases{{2, 0.0}, {2, 1.0}};
  int grisvard_m = 0;
  std::vector<double> grisvard_js{8, 16, 32, 64};
  // counterexample
  int indicator_samples = 4096;
  std::vector<double> indicator_floors{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  int psi_samples = 8192;
  std::vector<double> psi_floors{1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
  // riesz
  double pv_epsilon_steps = 2.0;
  int pv_samples = 512;
  // output
  std::string out_dir = "labout";
  bool write_csv = true;
  bool write_json = true;
  bool write_plots = true;

  static ExperimentConfig parse(const std::string& text);
  /// Throws ConfigError on an unreadable file.
  static ExperimentConfig load(const std::string& path);
  /// Applies one key=value assignment.
  void set(const std::string& key, const std::string& value);
  /// Checks every range against the module preconditions; throws ConfigError
  /// naming the violated condition.
  void validate() const;
  /// Sorted key=value lines of every result-affecting key.
  std::string canonical() const;
  /// FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;
  static std::vector<std::string> keys();
};

}  // namespace besovlab::lab
