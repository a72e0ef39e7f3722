#include "cubespec/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "cubespec/acceptance.hpp"
#include "cubespec/analysis.hpp"
#include "cubespec/edge_list.hpp"
#include "cubespec/format.hpp"
#include "cubespec/harness.hpp"
#include "cubespec/spectral.hpp"
#include "cubespec/theory.hpp"

namespace cubespec {

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// How a sample is specified on the command line: a file, or n with p or a
/// family and a seed.
struct SampleSource {
  std::string in;
  int n = 0;
  std::optional<double> p;
  std::string family;
  std::uint64_t seed = 0;
  std::string strategy = "auto";

  void add_generator(CLI::App* sub) {
    sub->add_option("--n", n, "cube dimension")->check(CLI::Range(1, kMaxDimension));
    auto* p_opt = sub->add_option("--p", p, "edge probability")->check(CLI::Range(0.0, 1.0));
    auto* f_opt = sub->add_option("--family", family, "probability family p(n), e.g. \"n^-1.5\"");
    p_opt->excludes(f_opt);
    sub->add_option("--seed", seed, "sample seed");
    sub->add_option("--strategy", strategy, "auto, sparse, dense or exhaustive")
        ->check(CLI::IsMember({"auto", "sparse", "dense", "exhaustive"}));
  }

  SubgraphSample draw() const {
    if (!in.empty()) return load_edge_list(in);
    if (n == 0) throw UsageError("--n is required unless --in is given");
    if (!p && family.empty()) throw UsageError("one of --p or --family is required");
    const EdgeProbability prob = p ? EdgeProbability(*p) : ProbabilityFamily::parse(family).at(n);
    static const std::map<std::string, SamplingStrategy> strategies = {
        {"auto", SamplingStrategy::automatic},
        {"sparse", SamplingStrategy::sparse},
        {"dense", SamplingStrategy::dense},
        {"exhaustive", SamplingStrategy::exhaustive},
    };
    return sample_subgraph(Dimension(n), prob, seed, strategies.at(strategy));
  }
};

// Twelve significant digits, then the shortest form of that value, so a
// converged estimate of an integer eigenvalue prints as an integer.
std::string format_estimate(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return format_shortest(std::strtod(buf, nullptr));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random subgraphs of the hypercube: sampling, spectra and Monte Carlo checks", "cubespec"};
  app.require_subcommand(1);

  SampleSource sample_src;
  std::string sample_out;
  auto* sample = app.add_subcommand("sample", "draw a subgraph and write its edge list");
  sample_src.add_generator(sample);
  sample->add_option("--out", sample_out, "output file (default: standard output)");

  std::string stats_in;
  auto* stats = app.add_subcommand("stats", "degree and component census of an edge-list file as JSON");
  stats->add_option("--in", stats_in, "edge-list file")->required()->check(CLI::ExistingFile);

  SampleSource spectrum_src;
  bool spectrum_json = false, spectrum_dump = false;
  auto* spectrum = app.add_subcommand("spectrum", "largest eigenvalue of a file or a fresh sample");
  spectrum->add_option("--in", spectrum_src.in, "edge-list file")->check(CLI::ExistingFile);
  spectrum_src.add_generator(spectrum);
  spectrum->add_flag("--json", spectrum_json, "print the full estimate as JSON");
  spectrum->add_flag("--dump", spectrum_dump, "print the dense spectrum, one eigenvalue per line");

  int predict_n = 0;
  std::string predict_family;
  bool predict_thresholds = false;
  auto* predict = app.add_subcommand("predict", "regime prediction for a dimension and family");
  predict->add_option("--n", predict_n, "cube dimension")->required()->check(CLI::Range(1, kMaxDimension));
  predict->add_option("--family", predict_family, "probability family p(n)")->required();
  predict->add_flag("--thresholds", predict_thresholds, "include the partition thresholds");

  std::string config_path, experiment_out, experiment_format;
  int experiment_threads = -1;
  auto* experiment = app.add_subcommand("experiment", "run a config file");
  experiment->add_option("--config", config_path, "config file")->required();
  experiment->add_option("--out", experiment_out, "output file (overrides the config)");
  experiment->add_option("--format", experiment_format, "csv or json (overrides the config)")
      ->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--threads", experiment_threads, "worker threads (overrides the config)")
      ->check(CLI::NonNegativeNumber);

  std::vector<int> verify_only;
  int verify_threads = 0;
  auto* verify = app.add_subcommand("verify", "run the built-in acceptance suite");
  verify->add_option("--only", verify_only, "criterion ids")->check(CLI::Range(1, kCriterionCount));
  verify->add_option("--threads", verify_threads, "worker threads")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (sample->parsed()) {
      const auto s = sample_src.draw();
      if (sample_out.empty())
        write_edge_list(out, s);
      else
        save_edge_list(sample_out, s);
      return kExitOk;
    }
    if (stats->parsed()) {
      const auto s = load_edge_list(stats_in);
      out << census_to_json(degree_profile(s), components(s)).dump(2) << '\n';
      return kExitOk;
    }
    if (spectrum->parsed()) {
      const auto s = spectrum_src.draw();
      if (spectrum_dump) {
        for (const double x : dense_spectrum(s)) out << format_g17(x) << '\n';
        return kExitOk;
      }
      const auto est = lambda_max(s);
      if (spectrum_json)
        out << nlohmann::json(est).dump(2) << '\n';
      else
        out << format_estimate(est.value) << '\n';
      return est.converged ? kExitOk : kExitCheckFailed;
    }
    if (predict->parsed()) {
      const auto family = ProbabilityFamily::parse(predict_family);
      auto doc = to_json(classify_regime(predict_n, family));
      if (predict_thresholds) {
        const double p = family.evaluate(predict_n);
        doc["thresholds"] = to_json(thresholds(predict_n, p, PartitionScale::polynomial));
        try {
          doc["thresholds_exponential"] = to_json(thresholds(predict_n, p, PartitionScale::exponential));
        } catch (const ThresholdUndefined&) {
        }
      }
      out << doc.dump(2) << '\n';
      return kExitOk;
    }
    if (experiment->parsed()) {
      auto config = load_config(config_path);
      if (!experiment_out.empty()) config.output = experiment_out;
      if (!experiment_format.empty()) config.format = experiment_format == "csv" ? OutputFormat::csv : OutputFormat::json;
      if (experiment_threads >= 0) config.threads = experiment_threads;
      const auto result = run_experiment(config);
      if (config.output.empty())
        emit(result, out);
      else
        emit(result, config.output, config.format);
      if (result.failed)
        err << "remark 2 lower bound violated in " << result.remark2_violations << " trial(s)\n";
      return result.failed ? kExitCheckFailed : kExitOk;
    }
    if (verify->parsed()) {
      AcceptanceOptions options;
      options.threads = verify_threads;
      options.only.insert(verify_only.begin(), verify_only.end());
      const auto results = run_acceptance(options, out);
      std::size_t passed = 0;
      for (const auto& r : results) passed += r.passed ? 1 : 0;
      out << passed << "/" << results.size() << " criteria passed\n";
      return passed == results.size() ? kExitOk : kExitCheckFailed;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cubespec
