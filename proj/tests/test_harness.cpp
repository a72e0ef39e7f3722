#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cubespec/harness.hpp"
#include "cubespec/spectral.hpp"

using namespace cubespec;

namespace {

ExperimentConfig config(std::vector<int> n_values, ProbabilityFamily family, std::uint32_t trials,
                        std::vector<Check> checks = {}) {
  ExperimentConfig c;
  c.n_values = std::move(n_values);
  c.family = family;
  c.trials = trials;
  c.checks = std::move(checks);
  return c;
}

std::string csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(R"(# an experiment
n_values = [12, 14]
family = "n^-1.5"   # polynomial
trials = 500
base_seed = 18446744073709551615
checks = [lambda_vs_sqrt_delta, "delta_vs_kappa"]
tolerance = 1e-9
output = "out#1.csv"
format = json
threads = 2
scale = exponential
alpha = 0.3
lemma9_min_degree = 3
)");
  CHECK(c.n_values == std::vector<int>{12, 14});
  CHECK(c.family.kind() == FamilyKind::polynomial);
  CHECK(c.family.parameter() == 1.5);
  CHECK(c.trials == 500);
  CHECK(c.base_seed == 18446744073709551615ull);
  CHECK(c.checks == std::vector<Check>{Check::lambda_vs_sqrt_delta, Check::delta_vs_kappa});
  CHECK(c.tolerance == 1e-9);
  CHECK(c.output == "out#1.csv");
  CHECK(c.format == OutputFormat::json);
  CHECK(c.threads == 2);
  CHECK(c.scale == PartitionScale::exponential);
  CHECK(c.alpha == 0.3);
  CHECK(c.lemma9_min_degree == 3);

  const auto minimal = parse_config("n_values = 8\nfamily = 0\n");
  CHECK(minimal.n_values == std::vector<int>{8});
  CHECK(minimal.trials == 1);
  CHECK(minimal.checks.empty());
  CHECK(minimal.format == OutputFormat::csv);
}

TEST_CASE("config errors name the field") {
  CHECK(field_of("family = 0\n") == "n_values");
  CHECK(field_of("n_values = [8]\n") == "family");
  CHECK(field_of("n_values = [8, 31]\nfamily = 0\n") == "n_values");
  CHECK(field_of("n_values = [0]\nfamily = 0\n") == "n_values");
  CHECK(field_of("n_values = []\nfamily = 0\n") == "n_values");
  CHECK(field_of("n_values = [8\nfamily = 0\n") == "n_values");
  CHECK(field_of("n_values = [eight]\nfamily = 0\n") == "n_values");
  CHECK(field_of("n_values = [8]\nfamily = banana\n") == "family");
  CHECK(field_of("n_values = [4]\nfamily = \"2*1.1^-n\"\n") == "family");
  CHECK(field_of("n_values = [8]\nfamily = 0\ntrials = 0\n") == "trials");
  CHECK(field_of("n_values = [8]\nfamily = 0\ntrials = -3\n") == "trials");
  CHECK(field_of("n_values = [8]\nfamily = 0\nchecks = [nope]\n") == "checks");
  CHECK(field_of("n_values = [8]\nfamily = 0\nformat = xml\n") == "format");
  CHECK(field_of("n_values = [8]\nfamily = 0\nscale = linear\n") == "scale");
  CHECK(field_of("n_values = [8]\nfamily = 0\nalpha = 1\n") == "alpha");
  CHECK(field_of("n_values = [8]\nfamily = 0\ntolerance = 0\n") == "tolerance");
  CHECK(field_of("n_values = [8]\nfamily = 0\nthreads = -1\n") == "threads");
  CHECK(field_of("n_values = [8]\nfamily = 0\ncolour = red\n") == "colour");
  CHECK(field_of("n_values = [8]\nn_values = [9]\nfamily = 0\n") == "n_values");
  CHECK(field_of("n_values = [8]\nfamily = 0\noutput = \"a\n") == "output");
  CHECK_THROWS_AS(parse_config("n_values [8]\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/cubespec.cfg"), ConfigError);
}

TEST_CASE("config text round trip") {
  auto c = config({8, 10}, ProbabilityFamily::resonant(2.5, 0.7), 17, {Check::lemma9, Check::empty_prob});
  c.base_seed = 99;
  c.tolerance = 3e-9;
  c.output = "x.json";
  c.format = OutputFormat::json;
  c.scale = PartitionScale::exponential;
  c.alpha = 0.4;
  const auto text = config_text(c);
  const auto back = parse_config(text);
  CHECK(back.n_values == c.n_values);
  CHECK(back.family.describe() == c.family.describe());
  CHECK(back.trials == c.trials);
  CHECK(back.base_seed == c.base_seed);
  CHECK(back.checks == c.checks);
  CHECK(back.tolerance == c.tolerance);
  CHECK(back.output == c.output);
  CHECK(back.format == c.format);
  CHECK(back.scale == c.scale);
  CHECK(back.alpha == c.alpha);
  CHECK(config_text(back) == text);
  for (std::size_t i = 0; i < kCheckCount; ++i) {
    const auto check = static_cast<Check>(i);
    CHECK(parse_check(to_string(check)) == check);
  }
}

TEST_CASE("trial seeds are pairwise distinct") {
  std::set<std::uint64_t> seen;
  for (int n = 1; n <= 30; ++n)
    for (std::uint32_t t = 0; t < 2000; ++t) seen.insert(trial_seed(12345, n, t));
  CHECK(seen.size() == 30u * 2000u);
  CHECK(trial_seed(0, 8, 3) != trial_seed(0, 3, 8));
}

TEST_CASE("p = 0 gives empty records") {
  const auto r = run_experiment(config({8}, ProbabilityFamily::literal(0.0), 3, {Check::lambda_vs_sqrt_delta}));
  REQUIRE(r.records.size() == 3);
  for (const auto& rec : r.records) {
    CHECK(rec.error.empty());
    CHECK(rec.edges == 0);
    CHECK(rec.max_degree == 0);
    CHECK(rec.lambda_max == 0.0);
    CHECK(rec.components == 0);
    CHECK(rec.star_law);
    CHECK(rec.check(Check::lambda_vs_sqrt_delta) == true);
  }
  CHECK_FALSE(r.failed);
}

TEST_CASE("record layout and seeds") {
  auto c = config({6, 7, 8}, ProbabilityFamily::polynomial(1.5), 11, {Check::delta_vs_kappa});
  c.base_seed = 5;
  const auto r = run_experiment(c);
  REQUIRE(r.records.size() == 33);
  std::size_t i = 0;
  for (const int n : c.n_values) {
    for (std::uint32_t t = 0; t < 11; ++t, ++i) {
      CHECK(r.records[i].n == n);
      CHECK(r.records[i].trial == t);
      CHECK(r.records[i].seed == trial_seed(5, n, t));
      CHECK(r.records[i].kappa == kappa(n, c.family.evaluate(n)));
      CHECK(r.records[i].check(Check::delta_vs_kappa).has_value());
      CHECK_FALSE(r.records[i].check(Check::empty_prob).has_value());
    }
  }
  REQUIRE(r.summaries.size() == 3);
  CHECK(r.summary(7)->metrics.at("trials") == 11);
  CHECK(r.summary(7)->regime == "I_polynomial");
  CHECK(r.summary(9) == nullptr);
}

TEST_CASE("records agree with a direct computation") {
  const auto r = run_experiment(config({9}, ProbabilityFamily::literal(0.08), 20, {Check::lambda_vs_sqrt_delta}));
  for (const auto& rec : r.records) {
    const auto s = sample_subgraph(Dimension(9), EdgeProbability(0.08), rec.seed);
    CHECK(rec.edges == s.edge_count());
    CHECK(rec.lambda_max == doctest::Approx(lambda_max(s).value).epsilon(1e-9));
    CHECK(rec.lambda_sq_minus_delta >= -1e-8);
  }
}

TEST_CASE("empty-graph frequency matches the exact probability") {
  const auto r = run_experiment(config({12}, ProbabilityFamily::critical(1.0), 5000, {Check::empty_prob}));
  const auto& m = r.summary(12)->metrics;
  CHECK(m.at("empty_oracle") == doctest::Approx(empty_graph_prob(12, 1.0 / (12.0 * 4096.0))));
  CHECK(std::abs(m.at("empty_freq") - m.at("empty_oracle")) <= 3.0 * m.at("empty_oracle_se"));
  CHECK(m.at("pass_rate_empty_prob") == m.at("empty_freq"));
  CHECK(m.at("exp_minus_nu") == doctest::Approx(std::exp(-1.0)));
  CHECK(m.at("exp_minus_nu_half") == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("resonant family at n = 18 follows the star law") {
  const auto r = run_experiment(config({18}, ProbabilityFamily::resonant(2.0), 200, {Check::lambda_vs_sqrt_delta}));
  CHECK(r.summary(18)->metrics.at("star_law_freq") >= 0.9);
  for (const auto& rec : r.records) {
    if (!rec.star_law) continue;
    CHECK(rec.lambda_max == doctest::Approx(std::sqrt(rec.max_degree)).epsilon(1e-15));
    CHECK(rec.largest_component_edges == static_cast<std::uint64_t>(rec.max_degree));
  }
}

TEST_CASE("every check runs without error at desk scale") {
  auto c = config({10}, ProbabilityFamily::polynomial(1.5), 8,
                  {Check::lambda_vs_sqrt_delta, Check::delta_vs_kappa, Check::empty_prob, Check::decomposition_bound,
                   Check::lemma9, Check::two_step_diagnostics, Check::subcube_census});
  const auto r = run_experiment(c);
  for (const auto& rec : r.records) {
    CHECK(rec.error.empty());
    for (const auto check : c.checks) CHECK(rec.check(check).has_value());
    CHECK(rec.diagnostics.has_value());
    CHECK(rec.check(Check::lambda_vs_sqrt_delta) == true);
    CHECK(rec.check(Check::decomposition_bound) == true);
    CHECK(rec.check(Check::lemma9) == true);
  }
  CHECK(lines(csv(r)).front() ==
        "n,trial,seed,edges,max_degree,kappa,lambda_max,lambda_sq_minus_delta,components,largest_component_edges,"
        "lambda_vs_sqrt_delta,delta_vs_kappa,empty_prob,decomposition_bound,lemma9,two_step_diagnostics,"
        "subcube_census");
}

TEST_CASE("per-trial errors are recorded, not thrown") {
  // partition thresholds are undefined at p = 0
  const auto r = run_experiment(config({6}, ProbabilityFamily::literal(0.0), 2, {Check::two_step_diagnostics}));
  REQUIRE(r.records.size() == 2);
  for (const auto& rec : r.records) {
    CHECK_FALSE(rec.error.empty());
    CHECK_FALSE(rec.check(Check::two_step_diagnostics).has_value());
  }
  CHECK(r.summary(6)->metrics.at("errors") == 2);
  CHECK(lines(csv(r)).size() == 3);
}

TEST_CASE("a Remark 2 violation fails the run") {
  auto c = config({8}, ProbabilityFamily::literal(0.2), 4, {Check::lambda_vs_sqrt_delta});
  c.tolerance = -1.0;  // demands lambda >= sqrt(Delta) + 1
  const auto r = run_experiment(c);
  CHECK(r.failed);
  CHECK(r.remark2_violations == 4);
  CHECK(r.summary(8)->metrics.at("remark2_violations") == 4);
}

TEST_CASE("diagnostic counts on a planted star") {
  const auto s = SubgraphSample::from_pairs(Dimension(6), std::vector<Edge>{{0, 1}, {0, 2}, {0, 4}, {0, 8}});
  const auto partition = vertex_partition(s, 1.0, 2.0);
  CHECK(partition[0] == Part::v3);
  const auto zero = diagnostic_counts(s, partition, DiagnosticCutoffs{});
  CHECK(zero.row_sum_v1 == 4);
  CHECK(zero.two_step_v23 == 0);
  CHECK(zero.v3_into_v23 == 0);
  CHECK(zero.v3_internal == 0);
  CHECK(diagnostic_counts(s, partition, DiagnosticCutoffs{0, 4, 0, 0}).all_empty());

  // Two adjacent hubs: both in V3, and each sees the other.
  const auto hubs = SubgraphSample::from_pairs(
      Dimension(6), std::vector<Edge>{{0, 1}, {0, 2}, {0, 4}, {1, 3}, {1, 5}, {1, 9}});
  const auto part = vertex_partition(hubs, 1.0, 2.0);
  const auto d = diagnostic_counts(hubs, part, DiagnosticCutoffs{});
  CHECK(d.v3_into_v23 == 2);
  CHECK(d.v3_internal == 2);
  CHECK(d.two_step_v23 == 0);  // no walk of length two joins the hubs
  CHECK(d.row_sum_v1 == 5);
}

TEST_CASE("csv shape") {
  ExperimentResult empty;
  empty.config = config({8}, ProbabilityFamily::literal(0.1), 1, {Check::empty_prob});
  CHECK(csv(empty) ==
        "n,trial,seed,edges,max_degree,kappa,lambda_max,lambda_sq_minus_delta,components,largest_component_edges,"
        "empty_prob\n");

  const auto r = run_experiment(config({7}, ProbabilityFamily::literal(0.3), 3, {Check::delta_vs_kappa, Check::empty_prob}));
  const auto rows = lines(csv(r));
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<std::string> cells;
    std::istringstream in(rows[i]);
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 12);
    CHECK(cells[0] == "7");
    CHECK(cells[1] == std::to_string(i - 1));
    CHECK(std::stod(cells[6]) == r.records[i - 1].lambda_max);
    CHECK((cells[11] == "0" || cells[11] == "1"));
  }
}

TEST_CASE("json round trip preserves records and aggregates") {
  auto c = config({8, 9}, ProbabilityFamily::polynomial(1.2), 25,
                  {Check::lambda_vs_sqrt_delta, Check::two_step_diagnostics, Check::empty_prob});
  c.base_seed = 3;
  const auto r = run_experiment(c);
  const auto doc = nlohmann::json::parse(to_json(r).dump());
  const auto back = result_from_json(doc);
  CHECK(back.failed == r.failed);
  REQUIRE(back.summaries.size() == r.summaries.size());
  for (std::size_t i = 0; i < r.summaries.size(); ++i) {
    CHECK(back.summaries[i].n == r.summaries[i].n);
    CHECK(back.summaries[i].p == r.summaries[i].p);
    CHECK(back.summaries[i].regime == r.summaries[i].regime);
    CHECK(back.summaries[i].metrics == r.summaries[i].metrics);
  }
  CHECK(csv(back) == csv(r));
  const auto again = summarize(back.config, back.records);
  for (std::size_t i = 0; i < r.summaries.size(); ++i) CHECK(again[i].metrics == r.summaries[i].metrics);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    CHECK(back.records[i].diagnostics.has_value() == r.records[i].diagnostics.has_value());
    CHECK(back.records[i].checks == r.records[i].checks);
  }
}

TEST_CASE("determinism across runs and thread counts") {
  auto c = config({9, 11}, ProbabilityFamily::polynomial(1.5), 40, {Check::lambda_vs_sqrt_delta, Check::delta_vs_kappa});
  c.threads = 1;
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  CHECK(csv(a) == csv(b));
  c.threads = 3;
  const auto m = run_experiment(c);
  CHECK(csv(a) == csv(m));
  for (std::size_t i = 0; i < a.summaries.size(); ++i) CHECK(a.summaries[i].metrics == m.summaries[i].metrics);
}

TEST_CASE("thread count resolution") {
  ExperimentConfig c;
  ::unsetenv(kThreadsEnv);
  CHECK(resolve_threads(c) == 0);
  ::setenv(kThreadsEnv, "3", 1);
  CHECK(resolve_threads(c) == 3);
  ::setenv(kThreadsEnv, "junk", 1);
  CHECK(resolve_threads(c) == 0);
  ::setenv(kThreadsEnv, "3", 1);
  c.threads = 2;
  CHECK(resolve_threads(c) == 2);
  ::unsetenv(kThreadsEnv);
}

TEST_CASE("emit reports the failing path") {
  const auto r = run_experiment(config({4}, ProbabilityFamily::literal(0.5), 1));
  const std::filesystem::path bad = "/nonexistent-dir/out.csv";
  try {
    emit(r, bad, OutputFormat::csv);
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
  }
  const auto path = std::filesystem::temp_directory_path() / "cubespec_emit_test.json";
  emit(r, path, OutputFormat::json);
  std::ifstream in(path);
  const auto back = result_from_json(nlohmann::json::parse(in));
  CHECK(back.records.size() == 1);
  std::filesystem::remove(path);
}
