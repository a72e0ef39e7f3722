#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cubespec/analysis.hpp"
#include "cubespec/theory.hpp"

using namespace cubespec;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Direct tail sum 2^n sum_{l >= k} C(n,l) p^l (1-p)^(n-l) in 50 digits.
Big expected_Xk_oracle(int n, double p_double, int k) {
  const Big p(p_double);
  Big total = 0;
  Big binom = 1;  // C(n, l)
  for (int l = 0; l <= n; ++l) {
    if (l > 0) binom = binom * (n - l + 1) / l;
    if (l >= k) total += binom * pow(p, l) * pow(1 - p, n - l);
  }
  return total * pow(Big(2), n);
}

Big single_term_oracle(int n, double p_double, int k) {
  const Big p(p_double);
  Big binom = 1;
  for (int l = 1; l <= k; ++l) binom = binom * (n - l + 1) / l;
  return pow(Big(2), n) * binom * pow(p, k) * pow(1 - p, n - k);
}

}  // namespace

TEST_CASE("log_expected_Xk examples") {
  CHECK(log_expected_Xk(3, 0.5, 3) == doctest::Approx(0.0));
  for (const int n : {1, 7, 20})
    for (const double p : {0.0, 0.3, 1.0}) CHECK(log_expected_Xk(n, p, 0) == n * std::log(2.0));
  CHECK(std::isinf(log_expected_Xk(5, 0.3, 6)));
  CHECK(std::isinf(log_expected_Xk(5, 0.0, 1)));
  CHECK(log_expected_Xk(5, 1.0, 5) == doctest::Approx(5 * std::log(2.0)));
  CHECK_THROWS_AS(log_expected_Xk(5, 0.3, 7), DomainError);
  CHECK_THROWS_AS(log_expected_Xk(5, 1.3, 1), DomainError);

  const double p = std::exp2(-10.0) / 20.0;
  const double oracle = static_cast<double>(log(expected_Xk_oracle(20, p, 2)));
  CHECK(std::abs(log_expected_Xk(20, p, 2) - oracle) <= 1e-10 * std::abs(oracle));
}

TEST_CASE("log_expected_Xk against 50-digit summation on the grid") {
  for (const int n : {8, 12, 16, 20})
    for (const double p : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      double previous = INFINITY;
      for (int k = 0; k <= n; ++k) {
        const double got = log_expected_Xk(n, p, k);
        const double want = static_cast<double>(log(expected_Xk_oracle(n, p, k)));
        CAPTURE(n);
        CAPTURE(p);
        CAPTURE(k);
        CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
        CHECK(got <= previous);
        previous = got;
      }
    }
}

TEST_CASE("kappa examples") {
  CHECK(kappa(4, 0.5) == 4);
  CHECK(kappa(4, 0.01) == 0);
  CHECK(std::exp(log_single_term(4, 0.01, 1)) == doctest::Approx(0.621).epsilon(1e-3));
  // Asymptotic statement; at n <= 12 the k = 4 family still sits at k - 2.
  for (const int k : {2, 3, 4})
    for (int n = 16; n <= 30; ++n) {
      const int got = kappa(n, ProbabilityFamily::resonant(k).evaluate(n));
      CAPTURE(n);
      CAPTURE(k);
      CHECK((got == k - 1 || got == k));
    }
  CHECK_THROWS_AS(kappa(4, -0.5), DomainError);
}

TEST_CASE("kappa is the threshold of the single-term criterion") {
  int points = 0;
  for (int n = 3; n <= 30; n += 3)
    for (int e = 1; e <= 20; ++e) {
      const double p = std::pow(10.0, -0.5 * e);
      const int k = kappa(n, p);
      ++points;
      CAPTURE(n);
      CAPTURE(p);
      REQUIRE(k >= 0);
      CHECK(single_term_oracle(n, p, k) >= 1);
      if (k < n) CHECK(single_term_oracle(n, p, k + 1) < 1);
    }
  CHECK(points == 200);
}

TEST_CASE("kappa closed form") {
  CHECK_FALSE(kappa_closed_form(10, 0.5).has_value());
  CHECK_FALSE(kappa_closed_form(10, 0.0).has_value());
  // Resonant families hit the integer exactly: n log 2 / (n/k log 2) = k.
  for (int n = 8; n <= 30; ++n) CHECK(kappa_closed_form(n, ProbabilityFamily::resonant(3).evaluate(n)) == 3);
}

TEST_CASE("classify_regime examples") {
  SUBCASE("polynomial") {
    const auto pred = classify_regime(16, ProbabilityFamily::polynomial(1.5));
    CHECK(pred.regime == Regime::I_polynomial);
    CHECK(pred.kappa == 4);
    const double centre = std::sqrt(4.0);
    REQUIRE(pred.epsilon.has_value());
    CHECK(pred.lambda_low == doctest::Approx(std::max(0.0, centre * (1 - *pred.epsilon))));
    CHECK(pred.lambda_high == doctest::Approx(centre * (1 + *pred.epsilon)));
    const double p = pred.p;
    const double delta_star = 16 * std::log(2.0) / -std::log(p);
    CHECK(std::sqrt(delta_star) >= pred.lambda_low);
    CHECK(std::sqrt(delta_star) <= pred.lambda_high);
  }
  SUBCASE("resonant") {
    for (const int n : {16, 20, 24}) {
      const auto pred = classify_regime(n, ProbabilityFamily::parse("0.7*2^-n/3/n"));
      CHECK(pred.regime == Regime::III_exponential_resonant_k);
      CHECK(pred.resonance_k == 3);
      CHECK(std::abs(pred.kappa - *pred.kappa_closed_form) <= 1);
      CHECK(pred.lambda_low == doctest::Approx(std::sqrt(2.0)));
      CHECK(pred.lambda_high == doctest::Approx(2.0));
      CHECK_FALSE(pred.high_inclusive);
    }
  }
  SUBCASE("critical") {
    const auto pred = classify_regime(12, ProbabilityFamily::parse("1/(n*2^n)"));
    CHECK(pred.regime == Regime::IV_critical_nu);
    CHECK(pred.nu == 1.0);
    CHECK(pred.lambda_low == 0.0);
    CHECK(pred.lambda_high == 1.0);
  }
  SUBCASE("resonance order one is the critical scale") {
    CHECK(classify_regime(12, ProbabilityFamily::resonant(1)).regime == Regime::IV_critical_nu);
  }
  SUBCASE("subcritical") {
    const auto pred = classify_regime(12, ProbabilityFamily::subcritical());
    CHECK(pred.regime == Regime::V_subcritical);
    CHECK(pred.lambda_low == 0.0);
    CHECK(pred.lambda_high == 0.0);
    CHECK(classify_regime(12, ProbabilityFamily::exponential(2.0, 1e-3)).regime == Regime::V_subcritical);
  }
  SUBCASE("exponential, non-resonant") {
    const auto pred = classify_regime(20, ProbabilityFamily::exponential(1.5));
    CHECK(pred.regime == Regime::II_exponential_nonresonant);
    REQUIRE(pred.kappa_closed_form.has_value());
    CHECK(pred.lambda_low == pred.lambda_high);
    CHECK(pred.lambda_low == doctest::Approx(std::sqrt(*pred.kappa_closed_form)));
  }
  SUBCASE("literal p is rejected") {
    CHECK_THROWS_AS(classify_regime(12, ProbabilityFamily::literal(0.01)), DomainError);
  }
}

TEST_CASE("prediction invariants") {
  const std::vector<ProbabilityFamily> families{
      ProbabilityFamily::polynomial(1.2),   ProbabilityFamily::polynomial(2.0),
      ProbabilityFamily::exponential(1.4),  ProbabilityFamily::resonant(2),
      ProbabilityFamily::resonant(4, 0.5),  ProbabilityFamily::resonant(2.5),
      ProbabilityFamily::critical(2.0),     ProbabilityFamily::subcritical(1.0)};
  for (const auto& f : families)
    for (int n = 4; n <= 30; ++n) {
      const auto pred = classify_regime(n, f);
      CAPTURE(f.describe());
      CAPTURE(n);
      CHECK(pred.lambda_low <= pred.lambda_high);
      if (pred.resonance_k) CHECK(*pred.resonance_k >= 1);
      // The tail is at least the single term, so E[X_kappa] >= 1 always.
      CHECK(pred.expected_Xk_at_kappa >= 1.0 - 1e-9);
      CHECK(pred.expected_Xk_at_kappa_plus_1 <= pred.expected_Xk_at_kappa);
    }
}

TEST_CASE("thresholds examples") {
  const auto t = thresholds(100, 0.001);
  CHECK(t.r_n == doctest::Approx(20.40).epsilon(1e-3));
  CHECK(t.delta_star == doctest::Approx(10.034).epsilon(1e-4));
  CHECK(t.v2_upper == doctest::Approx(100 / std::log(1000.0) / (t.r_n * t.r_n)));
  REQUIRE(t.tau_n.has_value());
  CHECK(*t.tau_n == doctest::Approx(std::exp(std::log(t.delta_star) / std::log(std::log(t.delta_star)))));
  CHECK(thresholds(100, 0.5).r_n == doctest::Approx(7420.7).epsilon(1e-4));

  CHECK_THROWS_AS(thresholds(2, 0.1), ThresholdUndefined);
  CHECK_THROWS_AS(thresholds(3, 0.3, PartitionScale::exponential), ThresholdUndefined);
  CHECK_THROWS_AS(thresholds(10, 0.0), DomainError);
  const auto tau = thresholds(30, 1e-3, PartitionScale::exponential);
  CHECK(tau.v2_upper == doctest::Approx(30 / std::log(1000.0) / (*tau.tau_n * *tau.tau_n)));
  for (int n = 3; n <= 30; ++n)
    for (const double p : {0.5, 1e-2, 1e-5}) {
      const auto tn = thresholds(n, p);
      CHECK(tn.r_n >= 1.0);
      CHECK(tn.v2_upper > 0.0);
    }
}

TEST_CASE("vertex_partition") {
  const auto t = thresholds(8, 0.05);
  const auto empty = vertex_partition(SubgraphSample::from_pairs(Dimension(8), {}), t);
  for (const auto part : empty.assignment) CHECK(part == Part::v1);

  const auto q4 = sample_subgraph(Dimension(4), EdgeProbability(1.0), 0);
  const auto t4 = thresholds(4, 0.5);
  REQUIRE(t4.r_n > 4);
  for (const auto part : vertex_partition(q4, t4).assignment) CHECK(part == Part::v1);

  // Planted star of degree 5 at vertex 0 in Q^6 plus an edge elsewhere.
  const std::vector<Edge> star{{0, 1}, {0, 2}, {0, 4}, {0, 8}, {0, 16}, {33, 35}};
  const auto planted = SubgraphSample::from_pairs(Dimension(6), star);
  const auto cuts = vertex_partition(planted, 1.0, 4.0);
  CHECK(cuts[0] == Part::v3);
  CHECK(cuts[1] == Part::v1);
  CHECK(cuts[63] == Part::v1);
  const auto middle = vertex_partition(planted, 1.0, 5.0);
  CHECK(middle[0] == Part::v2);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_subgraph(Dimension(10), EdgeProbability(0.3), seed);
    const auto part = vertex_partition(s, 2.0, 4.0);
    std::vector<int> by_degree(11, -1);
    for (Vertex v = 0; v < 1024; ++v) {
      auto& slot = by_degree[s.degree(v)];
      const int label = static_cast<int>(part[v]);
      if (slot < 0) slot = label;
      CHECK(slot == label);
    }
  }
}

TEST_CASE("empty_graph_prob") {
  CHECK(empty_graph_prob(2, 0.5) == doctest::Approx(0.0625));
  CHECK(empty_graph_prob(9, 0.0) == 1.0);
  CHECK(empty_graph_prob(9, 1.0) == 0.0);
  const double p = 1.0 / (12 * 4096.0);
  CHECK(empty_graph_prob(12, p) == doctest::Approx(std::exp(-0.5)).epsilon(1e-4));
}

TEST_CASE("empty_graph_prob matches the sampler, n = 10") {
  const double p = std::log(2.0) / 5120.0;  // q close to 1/2
  const double q = empty_graph_prob(10, p);
  const int trials = 100000;
  int empty = 0;
  for (int seed = 0; seed < trials; ++seed)
    empty += sample_subgraph(Dimension(10), EdgeProbability(p), seed).edge_count() == 0 ? 1 : 0;
  const double freq = empty / double(trials);
  CHECK(std::abs(freq - q) <= 3.0 * std::sqrt(q * (1 - q) / trials));
}

TEST_CASE("concentration_bounds") {
  const double p = std::pow(16.0, -1.5);
  const double q = p * -std::log(p) / std::log(2.0);
  double previous = 1.0;
  for (int j = 1; j <= 8; ++j) {
    const auto b = concentration_bounds(16, p, j);
    CHECK(b.upper_tail < previous);
    previous = b.upper_tail;
    CHECK(b.lower_tail == doctest::Approx(std::exp(-std::pow(1 / q, j))));
  }
  CHECK(concentration_bounds(16, p, 2).upper_tail == doctest::Approx(q * q));
  CHECK_THROWS_AS(concentration_bounds(16, p, 0), DomainError);
  CHECK_THROWS_AS(concentration_bounds(20, ProbabilityFamily::resonant(2).evaluate(20), 1), NotApplicable);
}

TEST_CASE("upper tail of the maximum degree, n = 16, p = n^-1.5") {
  const int n = 16;
  const double p = std::pow(16.0, -1.5);
  const int k = kappa(n, p);
  const int trials = 2000;
  int above = 0;
  for (int seed = 0; seed < trials; ++seed)
    if (degree_profile(sample_subgraph(Dimension(n), EdgeProbability(p), seed)).max_degree > k + 2) ++above;
  CHECK(above / double(trials) <= 3.0 * concentration_bounds(n, p, 2).upper_tail);
}

TEST_CASE("diagnostic cutoffs and subcube helpers") {
  const double p = std::pow(16.0, -1.5);
  const auto c = diagnostic_cutoffs(16, p);
  const double lp = -std::log(p), logn = std::log(16.0);
  CHECK(c.two_step_v23 == doctest::Approx(16 / lp * std::log(logn) / logn));
  CHECK(c.v3_internal == doctest::Approx(std::sqrt(c.v3_into_v23)));
  CHECK(c.row_sum_v1 > 16 * std::log(2.0) / lp);
  CHECK_NOTHROW(diagnostic_cutoffs(30, 1e-2, PartitionScale::exponential));
  CHECK_THROWS_AS(diagnostic_cutoffs(30, 1e-4, PartitionScale::exponential), ThresholdUndefined);

  CHECK(subcube_degree_threshold(16, p, 0.25) == kappa(12, p) - 2);
  CHECK_THROWS_AS(subcube_degree_threshold(3, p, 0.25), DomainError);
  const double s = subcube_success_probability(16, p, 0.25);
  CHECK(s <= 1.0);
}

TEST_CASE("json forms keep a fixed key order") {
  const auto j = to_json(classify_regime(20, ProbabilityFamily::parse("2^-n/2 / n")));
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.push_back(key);
  CHECK(keys == std::vector<std::string>{"n", "p", "family", "regime", "kappa", "kappa_closed_form",
                                         "predicted_lambda_interval", "epsilon",
                                         "expected_Xk_at_kappa", "expected_Xk_at_kappa_plus_1",
                                         "resonance_k", "nu"});
  CHECK(j["regime"] == "III_exponential_resonant_k");
  CHECK(j["resonance_k"] == 2);
  const auto t = to_json(thresholds(16, 0.01));
  CHECK(t["scale"] == "polynomial");
  CHECK(t.contains("r_n"));
}

TEST_CASE("family parsing") {
  CHECK(ProbabilityFamily::parse("0.01").kind() == FamilyKind::literal);
  CHECK(ProbabilityFamily::parse("n^-1.5").evaluate(16) == doctest::Approx(1.0 / 64));
  CHECK(ProbabilityFamily::parse("2^-n/2 / n").resonance_order() == 2);
  CHECK(ProbabilityFamily::parse("0.5*2^(-n/3)/n").coefficient() == 0.5);
  CHECK(ProbabilityFamily::parse("2^-n/2.5/n").resonance_order() == std::nullopt);
  CHECK(ProbabilityFamily::parse("2/(n*2^n)").kind() == FamilyKind::critical);
  CHECK(ProbabilityFamily::parse("1/(n*2^n*log n)").kind() == FamilyKind::subcritical);
  CHECK(ProbabilityFamily::parse("1.5^-n").evaluate(4) == doctest::Approx(std::pow(1.5, -4)));
  CHECK_THROWS_AS(ProbabilityFamily::parse("n^x"), DomainError);
  CHECK_THROWS_AS(ProbabilityFamily::parse(""), DomainError);
  for (const auto& f : {ProbabilityFamily::polynomial(1.5), ProbabilityFamily::exponential(1.3, 2.0),
                        ProbabilityFamily::resonant(3, 0.5), ProbabilityFamily::critical(2.0),
                        ProbabilityFamily::subcritical(0.5), ProbabilityFamily::literal(0.25)}) {
    const auto back = ProbabilityFamily::parse(f.describe());
    CHECK(back.kind() == f.kind());
    CHECK(back.evaluate(12) == doctest::Approx(f.evaluate(12)).epsilon(1e-14));
  }
}
