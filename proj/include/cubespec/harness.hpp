#pragma once

// Seeded Monte Carlo experiments over a grid of dimensions.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubespec/config.hpp"
#include "cubespec/sampler.hpp"
#include "cubespec/theory.hpp"

namespace cubespec {

inline constexpr std::size_t kCheckCount = 7;

/// Environment variable holding the default thread count.
inline constexpr const char* kThreadsEnv = "CUBESPEC_THREADS";

/// base_seed XOR splitmix64((n << 32) | trial).
std::uint64_t trial_seed(std::uint64_t base_seed, int n, std::uint32_t trial) noexcept;

/// Sizes of the four counted sets under the diagnostic cutoffs.
struct DiagnosticCounts {
  std::uint64_t two_step_v23 = 0;  // x in V2+V3 with too many two-step walks into V2+V3
  std::uint64_t row_sum_v1 = 0;    // x in V1 with an A^2 row sum above the cut
  std::uint64_t v3_into_v23 = 0;   // x in V3 with too many neighbours in V2+V3
  std::uint64_t v3_internal = 0;   // x in V3 with too many neighbours in V3

  bool all_empty() const noexcept {
    return two_step_v23 == 0 && row_sum_v1 == 0 && v3_into_v23 == 0 && v3_internal == 0;
  }
};

DiagnosticCounts diagnostic_counts(const SubgraphSample& sample, const VertexPartition& partition,
                                   const DiagnosticCutoffs& cutoffs);

struct TrialRecord {
  int n = 0;
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t edges = 0;
  int max_degree = 0;
  int kappa = 0;
  double lambda_max = 0.0;
  double lambda_sq_minus_delta = 0.0;
  std::uint64_t components = 0;
  std::uint64_t largest_component_edges = 0;
  bool converged = true;
  // forest whose largest component is a star carrying Delta edges, so that
  // lambda^2 = Delta exactly; also true for the empty graph
  bool star_law = false;
  std::array<std::optional<bool>, kCheckCount> checks{};
  std::optional<DiagnosticCounts> diagnostics;
  std::string error;  // empty unless the trial threw

  std::optional<bool> check(Check c) const { return checks[static_cast<std::size_t>(c)]; }
};

struct DimensionSummary {
  int n = 0;
  double p = 0.0;
  std::string regime;  // empty for a literal family
  std::map<std::string, double> metrics;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // by n in config order, then trial
  std::vector<DimensionSummary> summaries;
  std::uint64_t remark2_violations = 0;
  bool failed = false;  // any Remark 2 violation

  const DimensionSummary* summary(int n) const noexcept;
};

/// Runs every (n, trial) pair; per-trial exceptions end up in the record.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Threads for a run: config.threads, else CUBESPEC_THREADS, else 0 (the
/// OpenMP default).
int resolve_threads(const ExperimentConfig& config);

/// Recomputes the per-n summaries from the records.
std::vector<DimensionSummary> summarize(const ExperimentConfig& config,
                                        const std::vector<TrialRecord>& records);

std::string csv_header(const ExperimentConfig& config);
void write_csv(std::ostream& out, const ExperimentResult& result);

nlohmann::ordered_json to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& doc);

/// Writes to config.output (or `out` when empty) in config.format. Throws
/// std::runtime_error naming the path on I/O failure.
void emit(const ExperimentResult& result, std::ostream& out);
void emit(const ExperimentResult& result, const std::filesystem::path& path, OutputFormat format);

}  // namespace cubespec
