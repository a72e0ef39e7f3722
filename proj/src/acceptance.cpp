#include "cubespec/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

#include "cubespec/harness.hpp"
#include "cubespec/spectral.hpp"
#include "cubespec/theory.hpp"

namespace cubespec {

namespace {

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

struct Verdict {
  bool passed = false;
  std::string detail;
};

ExperimentConfig base_config(const AcceptanceOptions& options, std::vector<int> n_values,
                             ProbabilityFamily family, std::uint32_t trials, std::vector<Check> checks) {
  ExperimentConfig c;
  c.n_values = std::move(n_values);
  c.family = family;
  c.trials = trials;
  c.checks = std::move(checks);
  c.threads = options.threads;
  return c;
}

double metric(const ExperimentResult& r, int n, const char* key) {
  const auto* s = r.summary(n);
  if (!s) return std::nan("");
  const auto it = s->metrics.find(key);
  return it == s->metrics.end() ? std::nan("") : it->second;
}

std::uint64_t error_count(const ExperimentResult& r) {
  std::uint64_t errors = 0;
  for (const auto& rec : r.records) errors += rec.error.empty() ? 0 : 1;
  return errors;
}

Verdict full_cube_spectrum() {
  double worst = 0.0;
  for (const int n : {4, 8, 12, 16}) {
    const auto s = sample_subgraph(Dimension(n), EdgeProbability(1.0), 0);
    worst = std::max(worst, std::abs(lambda_max(s).value - n));
  }
  double worst_dense = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const auto spectrum = dense_spectrum(sample_subgraph(Dimension(n), EdgeProbability(1.0), 0));
    std::size_t i = 0;
    for (int k = 0; k <= n; ++k) {
      const auto mult = static_cast<std::size_t>(std::llround(std::exp(log_binomial(n, k))));
      for (std::size_t m = 0; m < mult; ++m, ++i) worst_dense = std::max(worst_dense, std::abs(spectrum[i] - (n - 2 * k)));
    }
  }
  return {worst <= 1e-8 && worst_dense <= 1e-8,
          fmt("max |lambda - n| = %.3g over n in {4,8,12,16}; max dense deviation %.3g for n <= 6", worst, worst_dense)};
}

Verdict oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t cases = 0;
  for (int n = 4; n <= 10; ++n) {
    for (const double p : {0.02, 0.05, 0.1, 0.3}) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = sample_subgraph(Dimension(n), EdgeProbability(p), seed);
        const double iterative = lambda_max(s).value;
        const double dense = dense_spectrum(s).front();
        const double rel = dense > 0.0 ? std::abs(iterative - dense) / dense : std::abs(iterative);
        worst = std::max(worst, rel);
        ++cases;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-8 && secs < 120.0,
          fmt("%zu samples, max relative deviation %.3g, %.1f s (limit 120 s)", cases, worst, secs)};
}

Verdict remark2_lower_bound(const AcceptanceOptions& o) {
  struct Arm {
    ProbabilityFamily family;
    std::vector<int> n_values;
  };
  const Arm arms[] = {
      {ProbabilityFamily::polynomial(1.5), {10, 12, 14}},
      {ProbabilityFamily::exponential(1.5), {12, 16}},
      {ProbabilityFamily::resonant(2), {16, 18}},
      {ProbabilityFamily::critical(1.0), {12}},
      {ProbabilityFamily::subcritical(1.0), {12}},
  };
  std::uint64_t trials = 0, violations = 0, errors = 0;
  std::string regimes;
  for (const auto& arm : arms) {
    auto c = base_config(o, arm.n_values, arm.family, 250, {Check::lambda_vs_sqrt_delta});
    c.tolerance = 1e-8;
    const auto r = run_experiment(c);
    trials += r.records.size();
    violations += r.remark2_violations;
    errors += error_count(r);
    regimes += (regimes.empty() ? "" : ",") + r.summaries.front().regime;
  }
  return {violations == 0 && errors == 0 && trials >= 2000,
          fmt("%llu trials over %s: %llu violations, %llu errors", static_cast<unsigned long long>(trials),
              regimes.c_str(), static_cast<unsigned long long>(violations), static_cast<unsigned long long>(errors))};
}

Verdict bipartite_symmetry() {
  std::size_t checked = 0, failures = 0;
  for (int n = 2; n <= 6; ++n) {
    for (const double p : {0.2, 0.5}) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto spectrum = dense_spectrum(sample_subgraph(Dimension(n), EdgeProbability(p), seed));
        failures += symmetry_check(spectrum, 1e-8) ? 0 : 1;
        ++checked;
      }
    }
  }
  return {failures == 0, fmt("%zu dense spectra (n = 2..6, p in {0.2, 0.5}), %zu asymmetric", checked, failures)};
}

Verdict star_law(const AcceptanceOptions& o) {
  const auto r = run_experiment(base_config(o, {16, 18, 20}, ProbabilityFamily::resonant(2), 200, {Check::lambda_vs_sqrt_delta}));
  bool ok = error_count(r) == 0;
  std::string detail;
  for (const int n : {16, 18, 20}) {
    const double star = metric(r, n, "star_law_freq");
    const double closed = metric(r, n, "delta_closed_within1_freq");
    ok = ok && star >= 0.9 && closed >= 0.95;
    detail += fmt("%sn=%d star %.3f, |Delta - closed| <= 1 %.3f", detail.empty() ? "" : "; ", n, star, closed);
  }
  return {ok, detail};
}

Verdict empty_graph_law(const AcceptanceOptions& o) {
  bool oracle_ok = true;
  std::string detail;
  for (const double nu : {0.5, 1.0, 2.0}) {
    const auto r = run_experiment(base_config(o, {12}, ProbabilityFamily::critical(nu), 5000, {Check::empty_prob}));
    const double freq = metric(r, 12, "empty_freq");
    const double q = metric(r, 12, "empty_oracle");
    const double se = metric(r, 12, "empty_oracle_se");
    const bool ok = std::abs(freq - q) <= 3.0 * se && error_count(r) == 0;
    oracle_ok = oracle_ok && ok;
    detail += fmt("nu=%g freq %.4f oracle %.4f (3 SE %.4f) e^-nu %.4f e^-nu/2 %.4f%s; ", nu, freq, q, 3.0 * se,
                  metric(r, 12, "exp_minus_nu"), metric(r, 12, "exp_minus_nu_half"), ok ? "" : " FAIL");
  }
  const auto sub = run_experiment(base_config(o, {12}, ProbabilityFamily::subcritical(1.0), 5000, {Check::empty_prob}));
  const double freq = metric(sub, 12, "empty_freq");
  const bool sub_ok = freq >= 0.95 && error_count(sub) == 0;
  detail += fmt("subcritical freq %.4f (need >= 0.95, exact %.4f)%s", freq, metric(sub, 12, "empty_oracle"),
                sub_ok ? "" : " FAIL");
  return {oracle_ok && sub_ok, detail};
}

Verdict kappa_concentration(const AcceptanceOptions& o) {
  const auto r = run_experiment(base_config(o, {16}, ProbabilityFamily::polynomial(1.5), 2000, {Check::delta_vs_kappa}));
  const double within = metric(r, 16, "pass_rate_delta_vs_kappa");
  bool ok = within >= 0.99 && error_count(r) == 0;
  std::string detail = fmt("kappa %g, |Delta - kappa| <= 2 in %.4f", metric(r, 16, "kappa"), within);
  for (const int j : {1, 2}) {
    const double freq = metric(r, 16, j == 1 ? "upper_tail_freq_j1" : "upper_tail_freq_j2");
    const double bound = metric(r, 16, j == 1 ? "upper_tail_bound_j1" : "upper_tail_bound_j2");
    ok = ok && freq <= 3.0 * bound;
    detail += fmt("; Pr(Delta > kappa+%d) %.4f vs 3 x %.4f", j, freq, bound);
  }
  return {ok, detail};
}

Verdict decomposition(const AcceptanceOptions&) {
  const int n = 10;
  const double p = ProbabilityFamily::polynomial(1.5).evaluate(n);
  const auto t = thresholds(n, p);
  std::size_t violations = 0;
  std::uint64_t cross_edges = 0;
  double worst_margin = -INFINITY;
  for (std::uint32_t trial = 0; trial < 100; ++trial) {
    const auto s = sample_subgraph(Dimension(n), EdgeProbability(p), trial_seed(0, n, trial));
    const auto db = decomposition_bound(s, vertex_partition(s, t));
    violations += db.holds ? 0 : 1;
    for (std::size_t i = 1; i < 6; ++i) cross_edges += db.part_edges[i];
    worst_margin = std::max(worst_margin, db.whole.value - db.sum);
  }
  return {violations == 0,
          fmt("100 seeds at n=10, p=%.4g, cuts (%.3g, %.3g): %zu violations, max lambda - sum %.3g, "
              "%llu edges outside G[V1]",
              p, t.lower_cut(), t.v2_upper, violations, worst_margin, static_cast<unsigned long long>(cross_edges))};
}

Verdict lemma9(const AcceptanceOptions&) {
  std::size_t violations = 0, certified = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = sample_subgraph(Dimension(8), EdgeProbability(0.05), seed);
    std::vector<Vertex> candidates;
    for (const auto v : s.graph().vertices())
      if (s.degree(v) >= 2) candidates.push_back(v);
    const auto cert = lemma9_certificate(s, thin_certificate_family(s, candidates));
    violations += certificate_holds(cert, dense_square_spectrum(s)) ? 0 : 1;
    certified += cert.certified_count;
  }
  return {violations == 0, fmt("50 seeds at n=8, p=0.05: %zu vertices certified in total, %zu violations", certified, violations)};
}

Verdict diagnostics(const AcceptanceOptions& o) {
  const auto r = run_experiment(base_config(o, {16}, ProbabilityFamily::polynomial(1.5), 500, {Check::two_step_diagnostics}));
  const double rate = metric(r, 16, "pass_rate_two_step_diagnostics");
  DiagnosticCounts total;
  for (const auto& rec : r.records) {
    if (!rec.diagnostics) continue;
    total.two_step_v23 += rec.diagnostics->two_step_v23;
    total.row_sum_v1 += rec.diagnostics->row_sum_v1;
    total.v3_into_v23 += rec.diagnostics->v3_into_v23;
    total.v3_internal += rec.diagnostics->v3_internal;
  }
  return {rate >= 0.99 && error_count(r) == 0,
          fmt("all four sets empty in %.4f of 500 trials; totals %llu/%llu/%llu/%llu", rate,
              static_cast<unsigned long long>(total.two_step_v23), static_cast<unsigned long long>(total.row_sum_v1),
              static_cast<unsigned long long>(total.v3_into_v23), static_cast<unsigned long long>(total.v3_internal))};
}

Verdict kappa_definition() {
  std::size_t points = 0, holds = 0;
  for (int n = 3; n <= 30; n += 3) {
    for (int e = 1; e <= 20; ++e) {
      const double p = std::pow(10.0, -0.5 * e);
      const int k = kappa(n, p);
      ++points;
      const bool at = k >= 0 && meets_kappa_criterion(n, p, k);
      const bool next = k + 1 > n || !meets_kappa_criterion(n, p, k + 1);
      holds += at && next ? 1 : 0;
    }
  }
  std::vector<ProbabilityFamily> families;
  for (const double g : {1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9})
    for (const double c : {0.5, 1.0, 2.0}) families.push_back(ProbabilityFamily::exponential(g, c));
  for (const double k : {1.5, 2.5, 3.5, 4.5, 5.5})
    for (const double c : {0.5, 1.0, 2.0}) families.push_back(ProbabilityFamily::resonant(k, c));
  std::size_t applicable = 0, agree = 0;
  for (const auto& f : families) {
    for (int n = 4; n <= 30; ++n) {
      RegimePrediction pred;
      try {
        pred = classify_regime(n, f);
      } catch (const DomainError&) {
        continue;  // p(n) outside [0, 1]
      }
      if (pred.regime != Regime::II_exponential_nonresonant) continue;
      ++applicable;
      agree += pred.kappa_closed_form && *pred.kappa_closed_form == pred.kappa ? 1 : 0;
    }
  }
  return {holds == points && agree == applicable,
          fmt("criterion exact at %zu/%zu grid points; closed form equals kappa at %zu/%zu regime-II points",
              holds, points, agree, applicable)};
}

Verdict determinism(const AcceptanceOptions& o) {
  auto c = base_config(o, {10, 12}, ProbabilityFamily::polynomial(1.5), 100,
                       {Check::lambda_vs_sqrt_delta, Check::delta_vs_kappa, Check::empty_prob});
  c.base_seed = 7;
  const auto csv = [](const ExperimentResult& r) {
    std::ostringstream out;
    write_csv(out, r);
    return out.str();
  };
  c.threads = 1;
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  c.threads = 4;
  const auto m = run_experiment(c);
  bool same_summaries = a.summaries.size() == m.summaries.size();
  for (std::size_t i = 0; same_summaries && i < a.summaries.size(); ++i)
    same_summaries = a.summaries[i].metrics == m.summaries[i].metrics;
  const bool same_csv = csv(a) == csv(b);
  return {same_csv && same_summaries,
          fmt("single-thread CSV %s; 1 vs 4 thread aggregates %s", same_csv ? "byte-identical" : "DIFFERS",
              same_summaries ? "identical" : "DIFFER")};
}

}  // namespace

std::string format_line(const CriterionResult& r) {
  return fmt("%s %2d %s (%.1f s): %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds, r.detail.c_str());
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out) {
  using Runner = std::function<Verdict()>;
  const std::pair<const char*, Runner> criteria[kCriterionCount] = {
      {"full_cube_spectrum", full_cube_spectrum},
      {"oracle_equivalence", oracle_equivalence},
      {"remark2_lower_bound", [&] { return remark2_lower_bound(options); }},
      {"bipartite_symmetry", bipartite_symmetry},
      {"star_law", [&] { return star_law(options); }},
      {"empty_graph_law", [&] { return empty_graph_law(options); }},
      {"kappa_concentration", [&] { return kappa_concentration(options); }},
      {"decomposition_bound", [&] { return decomposition(options); }},
      {"lemma9_certificate", [&] { return lemma9(options); }},
      {"two_step_diagnostics", [&] { return diagnostics(options); }},
      {"kappa_definition", kappa_definition},
      {"determinism", [&] { return determinism(options); }},
  };
  std::vector<CriterionResult> results;
  for (int i = 0; i < kCriterionCount; ++i) {
    const int id = i + 1;
    if (!options.only.empty() && !options.only.count(id)) continue;
    CriterionResult r;
    r.id = id;
    r.name = criteria[i].first;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto v = criteria[i].second();
      r.passed = v.passed;
      r.detail = v.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << format_line(r) << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace cubespec
