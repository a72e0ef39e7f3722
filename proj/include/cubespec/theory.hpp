#pragma once

// Closed-form predictions: the kappa(n) concentration point, E[X_k], regime
// classification of p(n), partition thresholds and tail bounds.

#include <optional>
#include <string_view>

#include <json.hpp>

#include "cubespec/partition.hpp"
#include "cubespec/probability.hpp"
#include "cubespec/sampler.hpp"

namespace cubespec {

class ThresholdUndefined : public DomainError {
public:
  using DomainError::DomainError;
};

class NotApplicable : public DomainError {
public:
  using DomainError::DomainError;
};

/// log C(n, k) via lgamma; -inf outside 0 <= k <= n.
double log_binomial(int n, int k) noexcept;

/// log(2^n C(n,k) p^k (1-p)^{n-k}).
double log_single_term(int n, double p, int k) noexcept;

/// log E[X_k] = log(2^n sum_{l >= k} C(n,l) p^l (1-p)^{n-l}); -inf when zero.
double log_expected_Xk(int n, double p, int k);

/// Absolute slack in log space when testing the single-term criterion >= 1.
inline constexpr double kKappaLogSlack = 1e-11;

bool meets_kappa_criterion(int n, double p, int k) noexcept;

/// Largest k in [0, n] with 2^n C(n,k) p^k (1-p)^{n-k} >= 1, or -1 if none.
int kappa(int n, double p);

/// floor(n log 2 / (log(1/p) - log n)); empty unless log(1/p) > log n.
std::optional<int> kappa_closed_form(int n, double p) noexcept;

/// (1 - p)^{n 2^{n-1}}.
double empty_graph_prob(int n, double p) noexcept;

/// Finite-n regime-I rule: log(1/p) <= n / log n.
bool polynomial_rule(int n, double p) noexcept;

enum class Regime {
  I_polynomial,
  II_exponential_nonresonant,
  III_exponential_resonant_k,
  IV_critical_nu,
  V_subcritical,
};

std::string_view to_string(Regime r) noexcept;

struct RegimePrediction {
  int n = 0;
  double p = 0.0;
  std::string family;
  Regime regime = Regime::I_polynomial;
  int kappa = 0;
  std::optional<int> kappa_closed_form;
  double lambda_low = 0.0;
  double lambda_high = 0.0;
  bool high_inclusive = true;
  std::optional<double> epsilon;  // regime I slack
  double expected_Xk_at_kappa = 0.0;
  double expected_Xk_at_kappa_plus_1 = 0.0;
  std::optional<int> resonance_k;
  std::optional<double> nu;
};

/// Classification is by declared family; literal p throws DomainError.
RegimePrediction classify_regime(int n, const ProbabilityFamily& family);

enum class PartitionScale { polynomial, exponential };

struct PartitionThresholds {
  PartitionScale scale = PartitionScale::polynomial;
  double r_n = 0.0;
  std::optional<double> tau_n;
  double delta_star = 0.0;
  double v2_upper = 0.0;

  /// r_n or tau_n according to the scale: the V1 / V2 cut.
  double lower_cut() const { return scale == PartitionScale::polynomial ? r_n : *tau_n; }
};

/// r_n = max(e^5 n p, exp(log n / log log n)), delta* = n log 2 / log(1/p),
/// tau_n = exp(log delta* / log log delta*), v2_upper = n / log(1/p) * t^{-2}.
PartitionThresholds thresholds(int n, double p, PartitionScale scale = PartitionScale::polynomial);

/// V1 = deg <= t1, V2 = t1 < deg <= t2, V3 = deg > max(t1, t2).
VertexPartition vertex_partition(const SubgraphSample& sample, double t1, double t2);
VertexPartition vertex_partition(const SubgraphSample& sample, const PartitionThresholds& t);

struct TailBounds {
  double lower_tail = 0.0;  // bound on Pr(Delta < kappa - j)
  double upper_tail = 0.0;  // bound on Pr(Delta > kappa + j)
};

/// Leading-order tail bounds around kappa; regime I only.
TailBounds concentration_bounds(int n, double p, int j);

/// Cutoffs for the counted sets in the partition diagnostics.
struct DiagnosticCutoffs {
  double two_step_v23 = 0.0;  // x in V2+V3: sum over y in V2+V3, y != x of (A^2)(x,y)
  double row_sum_v1 = 0.0;    // x in V1: row sum of A^2
  double v3_into_v23 = 0.0;   // x in V3: neighbours in V2+V3
  double v3_internal = 0.0;   // x in V3: neighbours in V3
};

DiagnosticCutoffs diagnostic_cutoffs(int n, double p, PartitionScale scale = PartitionScale::polynomial);

/// Reported only: 1 - 2^{alpha n} exp(-(2 p log(1/p))^{-2}).
double subcube_success_probability(int n, double p, double alpha) noexcept;

/// Degree threshold kappa(n - floor(alpha n)) - 2 for the subcube census.
int subcube_degree_threshold(int n, double p, double alpha);

nlohmann::ordered_json to_json(const RegimePrediction& pred);
nlohmann::ordered_json to_json(const PartitionThresholds& t);

}  // namespace cubespec
