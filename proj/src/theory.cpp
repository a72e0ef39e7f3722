#include "cubespec/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cubespec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2 = std::log(2.0);

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0, 1]");
}

void check_interior(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(who) + " needs 0 < p < 1");
}

}  // namespace

double log_binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return kNegInf;
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_single_term(int n, double p, int k) noexcept {
  if (k < 0 || k > n) return kNegInf;
  // Exact limits at the ends avoid 0 * log 0.
  const double lp = k == 0 ? 0.0 : std::log(p);
  const double lq = k == n ? 0.0 : std::log1p(-p);
  return n * kLog2 + log_binomial(n, k) + k * lp + (n - k) * lq;
}

double log_expected_Xk(int n, double p, int k) {
  check_probability(p);
  if (k < 0 || k > n + 1) throw DomainError("log_expected_Xk: k outside [0, n+1]");
  if (k == 0) return n * kLog2;
  if (k > n) return kNegInf;
  if (p == 0.0) return kNegInf;
  if (p == 1.0) return n * kLog2;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n - k + 1));
  for (int l = k; l <= n; ++l) terms.push_back(log_single_term(n, p, l));
  const double top = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (const double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

bool meets_kappa_criterion(int n, double p, int k) noexcept {
  return log_single_term(n, p, k) >= -kKappaLogSlack;
}

int kappa(int n, double p) {
  check_probability(p);
  if (n < 1) throw DomainError("kappa needs n >= 1");
  for (int k = n; k >= 0; --k)
    if (meets_kappa_criterion(n, p, k)) return k;
  return -1;
}

std::optional<int> kappa_closed_form(int n, double p) noexcept {
  if (!(p > 0.0 && p < 1.0)) return std::nullopt;
  const double denom = -std::log(p) - std::log(static_cast<double>(n));
  if (!(denom > 0.0)) return std::nullopt;
  // Resonant families land on integers exactly; absorb rounding below them.
  return static_cast<int>(std::floor(n * kLog2 / denom + 1e-9));
}

double empty_graph_prob(int n, double p) noexcept {
  const double edges = std::ldexp(static_cast<double>(n), n - 1);
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  return std::exp(edges * std::log1p(-p));
}

bool polynomial_rule(int n, double p) noexcept {
  if (!(p > 0.0)) return false;
  return -std::log(p) <= n / std::log(static_cast<double>(n));
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::I_polynomial: return "I_polynomial";
    case Regime::II_exponential_nonresonant: return "II_exponential_nonresonant";
    case Regime::III_exponential_resonant_k: return "III_exponential_resonant_k";
    case Regime::IV_critical_nu: return "IV_critical_nu";
    case Regime::V_subcritical: return "V_subcritical";
  }
  return "unknown";
}

// Regimes --------------------------------------------------------------------

RegimePrediction classify_regime(int n, const ProbabilityFamily& family) {
  if (family.kind() == FamilyKind::literal)
    throw DomainError("classification is family-based; literal p = " + family.describe() +
                      " has no declared family");
  (void)Dimension(n);
  RegimePrediction out;
  out.n = n;
  out.p = family.evaluate(n);
  out.family = family.describe();
  const double p = out.p;
  out.kappa = kappa(n, p);
  out.kappa_closed_form = kappa_closed_form(n, p);
  if (out.kappa >= 0) {
    out.expected_Xk_at_kappa = std::exp(log_expected_Xk(n, p, out.kappa));
    out.expected_Xk_at_kappa_plus_1 = std::exp(log_expected_Xk(n, p, std::min(out.kappa + 1, n + 1)));
  }

  const double scaled = p * n * std::exp2(static_cast<double>(n));  // p n 2^n
  const auto resonance = family.resonance_order();

  if (family.kind() == FamilyKind::critical || resonance == 1) {
    out.regime = Regime::IV_critical_nu;
    out.nu = family.coefficient();
    out.lambda_low = 0.0;
    out.lambda_high = 1.0;
    return out;
  }
  if (family.kind() == FamilyKind::subcritical || scaled < 1.0 / std::log(static_cast<double>(n))) {
    out.regime = Regime::V_subcritical;
    return out;
  }
  if (resonance && *resonance >= 2) {
    const int k = *resonance;
    out.regime = Regime::III_exponential_resonant_k;
    out.resonance_k = k;
    out.lambda_low = std::sqrt(k - 1.0);
    out.lambda_high = std::sqrt(k + 1.0);
    out.high_inclusive = false;
    return out;
  }
  if (polynomial_rule(n, p)) {
    out.regime = Regime::I_polynomial;
    const double lp = -std::log(p);
    double eps = std::numeric_limits<double>::infinity();
    if (lp > 1.0 && n >= 3) {
      const double r = std::max(std::exp(5.0) * n * p,
                                std::exp(std::log(n) / std::log(std::log(n))));
      eps = 1.0 / std::log(lp) + 2.0 * std::log(r) / std::log(static_cast<double>(n));
    }
    out.epsilon = eps;
    const double centre = std::sqrt(std::max(0, out.kappa));
    out.lambda_low = std::max(0.0, centre * (1.0 - eps));
    out.lambda_high = centre * (1.0 + eps);
    return out;
  }
  out.regime = Regime::II_exponential_nonresonant;
  const double centre = std::sqrt(static_cast<double>(out.kappa_closed_form.value_or(out.kappa)));
  out.lambda_low = centre;
  out.lambda_high = centre;
  return out;
}

// Partition ------------------------------------------------------------------

PartitionThresholds thresholds(int n, double p, PartitionScale scale) {
  check_interior(p, "thresholds");
  if (n < 3) throw ThresholdUndefined("r_n: log log n undefined for n = " + std::to_string(n));
  const double logn = std::log(static_cast<double>(n));
  const double lp = -std::log(p);
  PartitionThresholds t;
  t.scale = scale;
  t.r_n = std::max(std::exp(5.0) * n * p, std::exp(logn / std::log(logn)));
  t.delta_star = n * kLog2 / lp;
  if (t.delta_star > std::exp(1.0))
    t.tau_n = std::exp(std::log(t.delta_star) / std::log(std::log(t.delta_star)));
  if (scale == PartitionScale::exponential && !t.tau_n)
    throw ThresholdUndefined("tau_n: log log delta* undefined (delta* = " +
                             std::to_string(t.delta_star) + " <= e)");
  const double cut = t.lower_cut();
  t.v2_upper = n / lp / (cut * cut);
  return t;
}

VertexPartition vertex_partition(const SubgraphSample& sample, double t1, double t2) {
  const int n = sample.dimension().value();
  std::vector<Part> by_degree(static_cast<std::size_t>(n) + 1);
  for (int d = 0; d <= n; ++d) {
    if (d <= t1)
      by_degree[d] = Part::v1;
    else if (d <= t2)
      by_degree[d] = Part::v2;
    else
      by_degree[d] = Part::v3;
  }
  VertexPartition out;
  out.assignment.assign(sample.dimension().vertex_count(), by_degree[0]);
  const auto& g = sample.graph();
  for (std::size_t i = 0; i < g.size(); ++i) out.assignment[g.vertex(i)] = by_degree[g.degree(i)];
  return out;
}

VertexPartition vertex_partition(const SubgraphSample& sample, const PartitionThresholds& t) {
  return vertex_partition(sample, t.lower_cut(), t.v2_upper);
}

// Bounds ---------------------------------------------------------------------

TailBounds concentration_bounds(int n, double p, int j) {
  check_interior(p, "concentration_bounds");
  if (j < 1) throw DomainError("concentration_bounds needs j >= 1");
  if (!polynomial_rule(n, p))
    throw NotApplicable("concentration bounds apply to the polynomial regime only");
  const double q = p * -std::log(p) / kLog2;
  return {std::exp(-std::pow(1.0 / q, j)), std::pow(q, j)};
}

DiagnosticCutoffs diagnostic_cutoffs(int n, double p, PartitionScale scale) {
  const auto t = thresholds(n, p, scale);
  const double logn = std::log(static_cast<double>(n));
  const double lp = -std::log(p);
  DiagnosticCutoffs c;
  if (scale == PartitionScale::polynomial) {
    c.two_step_v23 = n / lp * std::log(logn) / logn;
    c.row_sum_v1 = n * kLog2 / lp * (1.0 + 4.0 / std::log(logn) + 2.0 * std::log(t.r_n) / logn);
    c.v3_into_v23 = n * kLog2 / (lp * logn);
    c.v3_internal = std::sqrt(c.v3_into_v23);
  } else {
    const double tau = *t.tau_n;
    c.two_step_v23 = n / (lp * std::cbrt(tau));
    c.row_sum_v1 = n * kLog2 / lp * (1.0 + 1.0 / std::log(lp));
    c.v3_into_v23 = n * kLog2 / (lp * std::sqrt(tau));
    c.v3_internal = std::sqrt(n * kLog2 / (lp * tau));
  }
  return c;
}

double subcube_success_probability(int n, double p, double alpha) noexcept {
  const double q = 2.0 * p * -std::log(p);
  return 1.0 - std::exp2(alpha * n) * std::exp(-1.0 / (q * q));
}

int subcube_degree_threshold(int n, double p, double alpha) {
  const int f = fixed_bits_for(Dimension(n), alpha);
  return kappa(n - f, p) - 2;
}

// JSON -----------------------------------------------------------------------

namespace {

template <typename T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const RegimePrediction& pred) {
  nlohmann::ordered_json j;
  j["n"] = pred.n;
  j["p"] = pred.p;
  j["family"] = pred.family;
  j["regime"] = std::string(to_string(pred.regime));
  j["kappa"] = pred.kappa;
  j["kappa_closed_form"] = opt(pred.kappa_closed_form);
  j["predicted_lambda_interval"] = {{"low", pred.lambda_low},
                                    {"high", finite_or_null(pred.lambda_high)},
                                    {"high_inclusive", pred.high_inclusive}};
  j["epsilon"] = pred.epsilon ? finite_or_null(*pred.epsilon) : nlohmann::ordered_json(nullptr);
  j["expected_Xk_at_kappa"] = pred.expected_Xk_at_kappa;
  j["expected_Xk_at_kappa_plus_1"] = pred.expected_Xk_at_kappa_plus_1;
  j["resonance_k"] = opt(pred.resonance_k);
  j["nu"] = opt(pred.nu);
  return j;
}

nlohmann::ordered_json to_json(const PartitionThresholds& t) {
  nlohmann::ordered_json j;
  j["scale"] = t.scale == PartitionScale::polynomial ? "polynomial" : "exponential";
  j["r_n"] = t.r_n;
  j["tau_n"] = opt(t.tau_n);
  j["delta_star"] = t.delta_star;
  j["v2_upper"] = t.v2_upper;
  return j;
}

}  // namespace cubespec
