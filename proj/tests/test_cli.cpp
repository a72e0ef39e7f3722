#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubespec/cli.hpp"
#include "cubespec/edge_list.hpp"
#include "cubespec/spectral.hpp"

using namespace cubespec;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cubespec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cubespec_cli_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (const char c : text) n += c == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("spectrum of the full 8-cube") {
  const auto r = cli({"spectrum", "--n", "8", "--p", "1", "--seed", "0"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "8.0\n");
}

TEST_CASE("predict on the resonant family") {
  const auto r = cli({"predict", "--n", "20", "--family", "2^-n/2 / n"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["regime"] == "III_exponential_resonant_k");
  CHECK(j["resonance_k"] == 2);
  CHECK(j["n"] == 20);

  const auto t = cli({"predict", "--n", "16", "--family", "n^-1.5", "--thresholds"});
  REQUIRE(t.code == kExitOk);
  const auto jt = nlohmann::json::parse(t.out);
  CHECK(jt["regime"] == "I_polynomial");
  CHECK(jt.contains("thresholds"));

  CHECK(cli({"predict", "--n", "16", "--family", "0.01"}).code == kExitUsage);
  CHECK(cli({"predict", "--n", "16", "--family", "banana"}).code == kExitUsage);
}

TEST_CASE("usage errors exit with 2") {
  const auto missing = cli({"experiment", "--config", "missing.toml"});
  CHECK(missing.code == kExitUsage);
  CHECK(missing.err.find("missing.toml") != std::string::npos);

  const auto unknown = cli({"frobnicate"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("Usage") != std::string::npos);

  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"spectrum", "--n", "8", "--p", "1", "--bogus"}).code == kExitUsage);
  CHECK(cli({"spectrum", "--n", "8", "--p", "1", "--family", "n^-1"}).code == kExitUsage);
  CHECK(cli({"spectrum", "--n", "31", "--p", "1"}).code == kExitUsage);
  CHECK(cli({"spectrum", "--n", "8"}).code == kExitUsage);
  CHECK(cli({"spectrum", "--p", "0.5"}).code == kExitUsage);
  CHECK(cli({"sample", "--n", "8", "--p", "1.5"}).code == kExitUsage);
  CHECK(cli({"stats", "--in", "/nonexistent/file"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("sample, stats and spectrum agree") {
  const auto path = temp("sample.txt");
  REQUIRE(cli({"sample", "--n", "7", "--p", "0.2", "--seed", "11", "--out", path.string()}).code == kExitOk);
  const auto fresh = sample_subgraph(Dimension(7), EdgeProbability(0.2), 11);
  const auto loaded = load_edge_list(path);
  CHECK(std::vector<EdgeId>(loaded.edge_ids().begin(), loaded.edge_ids().end()) ==
        std::vector<EdgeId>(fresh.edge_ids().begin(), fresh.edge_ids().end()));

  const auto to_stdout = cli({"sample", "--n", "7", "--p", "0.2", "--seed", "11"});
  std::ifstream in(path);
  CHECK(to_stdout.out == std::string(std::istreambuf_iterator<char>(in), {}));

  const auto stats = cli({"stats", "--in", path.string()});
  REQUIRE(stats.code == kExitOk);
  const auto census = nlohmann::json::parse(stats.out);
  CHECK(census["degree_profile"]["total_edges"] == fresh.edge_count());

  const auto from_file = cli({"spectrum", "--in", path.string(), "--json"});
  const auto from_seed = cli({"spectrum", "--n", "7", "--p", "0.2", "--seed", "11", "--json"});
  CHECK(from_file.out == from_seed.out);
  CHECK(nlohmann::json::parse(from_file.out)["value"].get<double>() ==
        doctest::Approx(dense_spectrum(fresh).front()).epsilon(1e-10));
  std::filesystem::remove(path);

  const auto family = cli({"sample", "--n", "10", "--family", "n^-1.5", "--seed", "2", "--strategy", "exhaustive"});
  CHECK(family.code == kExitOk);
  CHECK(family.out.rfind("cube-subgraph v1 n=10", 0) == 0);
}

TEST_CASE("spectrum dump") {
  const auto r = cli({"spectrum", "--n", "3", "--p", "1", "--dump"});
  REQUIRE(r.code == kExitOk);
  CHECK(line_count(r.out) == 8);
  std::istringstream in(r.out);
  std::vector<double> values;
  for (double x; in >> x;) values.push_back(x);
  REQUIRE(values.size() == 8);
  CHECK(values.front() == doctest::Approx(3.0));
  CHECK(values.back() == doctest::Approx(-3.0));
  CHECK(cli({"spectrum", "--n", "13", "--p", "0.01", "--dump"}).code == kExitUsage);
}

TEST_CASE("experiment subcommand") {
  const auto cfg = temp("exp.cfg");
  const auto out = temp("exp.csv");
  write_file(cfg, "n_values = [6, 7]\nfamily = \"n^-1.5\"\ntrials = 5\nchecks = [lambda_vs_sqrt_delta, empty_prob]\n");

  const auto to_stdout = cli({"experiment", "--config", cfg.string(), "--threads", "1"});
  REQUIRE(to_stdout.code == kExitOk);
  CHECK(line_count(to_stdout.out) == 11);
  CHECK(to_stdout.out.rfind("n,trial,seed,", 0) == 0);

  REQUIRE(cli({"experiment", "--config", cfg.string(), "--out", out.string()}).code == kExitOk);
  std::ifstream in(out);
  CHECK(std::string(std::istreambuf_iterator<char>(in), {}) == to_stdout.out);

  const auto json = cli({"experiment", "--config", cfg.string(), "--format", "json"});
  REQUIRE(json.code == kExitOk);
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["records"].size() == 10);
  CHECK(doc["summaries"].size() == 2);

  write_file(cfg, "n_values = [6]\nfamily = \"n^-1.5\"\ntrials = 0\n");
  const auto bad = cli({"experiment", "--config", cfg.string()});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("trials") != std::string::npos);

  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}

TEST_CASE("verify a single criterion") {
  const auto r = cli({"verify", "--only", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("PASS  1 full_cube_spectrum", 0) == 0);
  CHECK(r.out.find("1/1 criteria passed") != std::string::npos);
  CHECK(cli({"verify", "--only", "13"}).code == kExitUsage);
}
