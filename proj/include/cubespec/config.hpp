#pragma once

// Experiment configuration: a flat `key = value` text file.
//
//   # comment
//   n_values   = [12, 14]
//   family     = "n^-1.5"
//   trials     = 500
//   base_seed  = 1
//   checks     = [lambda_vs_sqrt_delta, delta_vs_kappa]
//
// Values are integers, decimals, strings (optionally quoted) or bracketed
// lists of those. Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cubespec/probability.hpp"
#include "cubespec/theory.hpp"

namespace cubespec {

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

enum class Check {
  lambda_vs_sqrt_delta,
  delta_vs_kappa,
  empty_prob,
  decomposition_bound,
  lemma9,
  two_step_diagnostics,
  subcube_census,
};

std::string_view to_string(Check c) noexcept;
std::optional<Check> parse_check(std::string_view name) noexcept;

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  std::vector<int> n_values;
  ProbabilityFamily family = ProbabilityFamily::literal(0.0);
  std::uint32_t trials = 1;
  std::uint64_t base_seed = 0;
  std::vector<Check> checks;
  double tolerance = 1e-10;  // lambda_vs_sqrt_delta slack
  std::string output;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
  int threads = 0;  // 0: CUBESPEC_THREADS, else the OpenMP default
  PartitionScale scale = PartitionScale::polynomial;
  double alpha = 0.25;           // subcube_census
  int lemma9_min_degree = 2;     // lemma9 candidate degree

  bool has(Check c) const noexcept;
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(config_text(c)) == c.
std::string config_text(const ExperimentConfig& config);

}  // namespace cubespec
