#pragma once

// The built-in acceptance suite: twelve criteria, one pass/fail line each.

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace cubespec {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int threads = 0;          // 0: resolved as for experiments
  std::set<int> only;       // empty: all criteria
};

inline constexpr int kCriterionCount = 12;

/// Runs the selected criteria in order, writing each line to `out` as soon as
/// it is known.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out);

/// "PASS  3 remark2_lower_bound (12.3 s): detail"
std::string format_line(const CriterionResult& result);

}  // namespace cubespec
