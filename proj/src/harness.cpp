#include "cubespec/harness.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "cubespec/analysis.hpp"
#include "cubespec/format.hpp"
#include "cubespec/random.hpp"
#include "cubespec/spectral.hpp"

namespace cubespec {

namespace {

std::size_t slot(Check c) { return static_cast<std::size_t>(c); }

bool in_v23(const VertexPartition& partition, Vertex v) { return partition[v] != Part::v1; }

struct Moments {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double se() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
    return std::sqrt(var / count);
  }
};

void put(std::map<std::string, double>& metrics, const std::string& key, double value) {
  if (std::isfinite(value)) metrics[key] = value;
}

bool lemma9_passes(const SubgraphSample& s, int min_degree) {
  std::vector<Vertex> candidates;
  for (const auto v : s.graph().vertices())
    if (static_cast<int>(s.degree(v)) >= min_degree) candidates.push_back(v);
  const auto cert = lemma9_certificate(s, thin_certificate_family(s, candidates));
  return certificate_holds(cert, dense_square_spectrum(s));
}

bool subcube_passes(const SubgraphSample& s, double alpha) {
  const int n = s.dimension().value();
  const int threshold = subcube_degree_threshold(n, s.probability().value(), alpha);
  const auto census = subcube_high_degree_census(s, alpha, threshold);
  const double needed = std::ldexp(1.0, fixed_bits_for(s.dimension(), alpha)) / (2.0 * n * n);
  return static_cast<double>(census.high_degree_vertices) >= needed;
}

TrialRecord run_trial(const ExperimentConfig& config, int n, std::uint32_t trial, int kappa_n) {
  TrialRecord r;
  r.n = n;
  r.trial = trial;
  r.seed = trial_seed(config.base_seed, n, trial);
  r.kappa = kappa_n;
  try {
    const auto p = config.family.at(n);
    const auto s = sample_subgraph(Dimension(n), p, r.seed);
    const auto profile = degree_profile(s);
    const auto census = components(s);
    const PowerOptions power{.seed = r.seed};
    const auto est = lambda_max(s, power);

    r.edges = s.edge_count();
    r.max_degree = profile.max_degree;
    r.lambda_max = est.value;
    r.lambda_sq_minus_delta = est.value * est.value - profile.max_degree;
    r.components = census.components.size();
    const auto* largest = census.largest();
    r.largest_component_edges = largest ? largest->edge_count : 0;
    r.converged = est.converged;
    r.star_law = largest == nullptr ||
                 (census.is_forest() && largest->is_star &&
                  largest->edge_count == static_cast<std::uint64_t>(profile.max_degree) &&
                  est.method == SpectralMethod::exact_star);

    const double delta = profile.max_degree;
    for (const auto c : config.checks) {
      bool pass = false;
      switch (c) {
        case Check::lambda_vs_sqrt_delta:
          pass = est.value >= std::sqrt(delta) - config.tolerance;
          break;
        case Check::delta_vs_kappa:
          pass = std::abs(profile.max_degree - kappa_n) <= 2;
          break;
        case Check::empty_prob:
          pass = s.edge_count() == 0;
          break;
        case Check::decomposition_bound: {
          const auto t = thresholds(n, p.value(), config.scale);
          pass = decomposition_bound(s, vertex_partition(s, t), power).holds;
          break;
        }
        case Check::lemma9:
          pass = lemma9_passes(s, config.lemma9_min_degree);
          break;
        case Check::two_step_diagnostics: {
          const auto t = thresholds(n, p.value(), config.scale);
          r.diagnostics = diagnostic_counts(s, vertex_partition(s, t), diagnostic_cutoffs(n, p.value(), config.scale));
          pass = r.diagnostics->all_empty();
          break;
        }
        case Check::subcube_census:
          pass = subcube_passes(s, config.alpha);
          break;
      }
      r.checks[slot(c)] = pass;
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, int n, std::uint32_t trial) noexcept {
  return base_seed ^ rng::splitmix64((static_cast<std::uint64_t>(n) << 32) | trial);
}

DiagnosticCounts diagnostic_counts(const SubgraphSample& sample, const VertexPartition& partition,
                                   const DiagnosticCutoffs& cutoffs) {
  DiagnosticCounts out;
  const auto v23 = [&](Vertex y) { return in_v23(partition, y); };
  // Isolated vertices contribute nothing to any of the counted quantities.
  for (const auto x : sample.graph().vertices()) {
    if (!in_v23(partition, x)) {
      if (static_cast<double>(row_sum_A2(sample, x)) > cutoffs.row_sum_v1) ++out.row_sum_v1;
      continue;
    }
    if (static_cast<double>(two_step_count(sample, x, v23)) > cutoffs.two_step_v23) ++out.two_step_v23;
    if (partition[x] != Part::v3) continue;
    std::uint64_t into = 0, internal = 0;
    for (const auto y : sample.neighbors(x)) {
      into += in_v23(partition, y) ? 1 : 0;
      internal += partition[y] == Part::v3 ? 1 : 0;
    }
    if (static_cast<double>(into) > cutoffs.v3_into_v23) ++out.v3_into_v23;
    if (static_cast<double>(internal) > cutoffs.v3_internal) ++out.v3_internal;
  }
  return out;
}

int resolve_threads(const ExperimentConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv(kThreadsEnv)) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 0;
}

const DimensionSummary* ExperimentResult::summary(int n) const noexcept {
  for (const auto& s : summaries)
    if (s.n == n) return &s;
  return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("trials", "must be at least 1");
  ExperimentResult result;
  result.config = config;

  std::vector<int> kappas;
  for (const int n : config.n_values) kappas.push_back(kappa(n, config.family.evaluate(n)));

  const std::size_t per_n = config.trials;
  const std::size_t total = per_n * config.n_values.size();
  result.records.resize(total);

  const int threads = resolve_threads(config);
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t ni = i / per_n;
    result.records[i] = run_trial(config, config.n_values[ni], static_cast<std::uint32_t>(i % per_n), kappas[ni]);
  }

  for (const auto& r : result.records) {
    if (const auto ok = r.check(Check::lambda_vs_sqrt_delta); ok && !*ok) ++result.remark2_violations;
  }
  result.failed = result.remark2_violations > 0;
  result.summaries = summarize(config, result.records);
  return result;
}

std::vector<DimensionSummary> summarize(const ExperimentConfig& config,
                                        const std::vector<TrialRecord>& records) {
  std::vector<DimensionSummary> out;
  for (const int n : config.n_values) {
    DimensionSummary s;
    s.n = n;
    s.p = config.family.evaluate(n);
    auto& m = s.metrics;

    std::optional<RegimePrediction> pred;
    if (config.family.kind() != FamilyKind::literal) {
      try {
        pred = classify_regime(n, config.family);
        s.regime = std::string(to_string(pred->regime));
      } catch (const DomainError&) {
      }
    }
    const int kap = kappa(n, s.p);
    const auto closed = kappa_closed_form(n, s.p);
    std::optional<TailBounds> tails[2];
    for (int j = 1; j <= 2; ++j) {
      try {
        tails[j - 1] = concentration_bounds(n, s.p, j);
      } catch (const DomainError&) {
      }
    }

    Moments edges, degree, lambda, excess;
    std::size_t trials = 0, errors = 0, stars = 0, within2 = 0, within_closed = 0, empty = 0, nonconverged = 0;
    std::size_t above[2] = {0, 0};
    std::array<std::size_t, kCheckCount> passes{}, attempted{};
    for (const auto& r : records) {
      if (r.n != n) continue;
      ++trials;
      if (!r.error.empty()) ++errors;
      for (std::size_t c = 0; c < kCheckCount; ++c) {
        if (!r.checks[c]) continue;
        ++attempted[c];
        passes[c] += *r.checks[c] ? 1 : 0;
      }
      if (!r.error.empty()) continue;
      edges.add(static_cast<double>(r.edges));
      degree.add(r.max_degree);
      lambda.add(r.lambda_max);
      excess.add(r.lambda_sq_minus_delta);
      stars += r.star_law ? 1 : 0;
      within2 += std::abs(r.max_degree - kap) <= 2 ? 1 : 0;
      if (closed) within_closed += std::abs(r.max_degree - *closed) <= 1 ? 1 : 0;
      empty += r.edges == 0 ? 1 : 0;
      nonconverged += r.converged ? 0 : 1;
      for (int j = 1; j <= 2; ++j) above[j - 1] += r.max_degree > kap + j ? 1 : 0;
    }
    const double ok = static_cast<double>(edges.count);

    m["trials"] = static_cast<double>(trials);
    m["errors"] = static_cast<double>(errors);
    m["kappa"] = kap;
    if (closed) m["kappa_closed_form"] = *closed;
    m["nonconverged"] = static_cast<double>(nonconverged);
    if (ok > 0) {
      m["mean_edges"] = edges.mean();
      m["se_edges"] = edges.se();
      m["mean_max_degree"] = degree.mean();
      m["se_max_degree"] = degree.se();
      m["mean_lambda_max"] = lambda.mean();
      m["se_lambda_max"] = lambda.se();
      m["mean_lambda_sq_minus_delta"] = excess.mean();
      m["star_law_freq"] = stars / ok;
      m["delta_kappa_within2_freq"] = within2 / ok;
      if (closed) m["delta_closed_within1_freq"] = within_closed / ok;
      const double q_hat = empty / ok;
      const double q = empty_graph_prob(n, s.p);
      m["empty_freq"] = q_hat;
      put(m, "empty_oracle", q);
      put(m, "empty_oracle_se", std::sqrt(q * (1.0 - q) / ok));
      for (int j = 1; j <= 2; ++j) {
        const auto suffix = std::to_string(j);
        m["upper_tail_freq_j" + suffix] = above[j - 1] / ok;
        if (tails[j - 1]) put(m, "upper_tail_bound_j" + suffix, tails[j - 1]->upper_tail);
      }
    }
    if (pred && pred->nu) {
      m["exp_minus_nu"] = std::exp(-*pred->nu);
      m["exp_minus_nu_half"] = std::exp(-*pred->nu / 2.0);
    }
    std::uint64_t violations = 0;
    for (const auto c : config.checks) {
      const auto i = slot(c);
      if (attempted[i] > 0) m["pass_rate_" + std::string(to_string(c))] = static_cast<double>(passes[i]) / attempted[i];
      if (c == Check::lambda_vs_sqrt_delta) violations = attempted[i] - passes[i];
    }
    m["remark2_violations"] = static_cast<double>(violations);
    out.push_back(std::move(s));
  }
  return out;
}

std::string csv_header(const ExperimentConfig& config) {
  std::string h = "n,trial,seed,edges,max_degree,kappa,lambda_max,lambda_sq_minus_delta,components,largest_component_edges";
  for (const auto c : config.checks) {
    h += ',';
    h += to_string(c);
  }
  return h;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << csv_header(result.config) << '\n';
  for (const auto& r : result.records) {
    const bool bad = !r.error.empty();
    out << r.n << ',' << r.trial << ',' << r.seed << ',' << r.edges << ',' << r.max_degree << ',' << r.kappa << ','
        << (bad ? "nan" : format_g17(r.lambda_max)) << ','
        << (bad ? "nan" : format_g17(r.lambda_sq_minus_delta)) << ',' << r.components << ','
        << r.largest_component_edges;
    for (const auto c : result.config.checks) out << ',' << (r.check(c).value_or(false) ? 1 : 0);
    out << '\n';
  }
}

nlohmann::ordered_json to_json(const ExperimentResult& result) {
  nlohmann::ordered_json doc;
  doc["config"] = config_text(result.config);
  doc["failed"] = result.failed;
  doc["remark2_violations"] = result.remark2_violations;
  auto& records = doc["records"] = nlohmann::ordered_json::array();
  for (const auto& r : result.records) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["edges"] = r.edges;
    j["max_degree"] = r.max_degree;
    j["kappa"] = r.kappa;
    j["lambda_max"] = r.lambda_max;
    j["lambda_sq_minus_delta"] = r.lambda_sq_minus_delta;
    j["components"] = r.components;
    j["largest_component_edges"] = r.largest_component_edges;
    j["converged"] = r.converged;
    j["star_law"] = r.star_law;
    auto& checks = j["checks"] = nlohmann::ordered_json::object();
    for (const auto c : result.config.checks)
      if (const auto v = r.check(c)) checks[std::string(to_string(c))] = *v;
    if (r.diagnostics) {
      j["diagnostics"] = {{"two_step_v23", r.diagnostics->two_step_v23},
                          {"row_sum_v1", r.diagnostics->row_sum_v1},
                          {"v3_into_v23", r.diagnostics->v3_into_v23},
                          {"v3_internal", r.diagnostics->v3_internal}};
    }
    if (!r.error.empty()) j["error"] = r.error;
    records.push_back(std::move(j));
  }
  auto& summaries = doc["summaries"] = nlohmann::ordered_json::array();
  for (const auto& s : result.summaries) {
    nlohmann::ordered_json j;
    j["n"] = s.n;
    j["p"] = s.p;
    j["regime"] = s.regime;
    j["metrics"] = s.metrics;
    summaries.push_back(std::move(j));
  }
  return doc;
}

ExperimentResult result_from_json(const nlohmann::json& doc) {
  ExperimentResult result;
  result.config = parse_config(doc.at("config").get<std::string>());
  result.failed = doc.at("failed").get<bool>();
  result.remark2_violations = doc.at("remark2_violations").get<std::uint64_t>();
  for (const auto& j : doc.at("records")) {
    TrialRecord r;
    r.n = j.at("n").get<int>();
    r.trial = j.at("trial").get<std::uint32_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.edges = j.at("edges").get<std::uint64_t>();
    r.max_degree = j.at("max_degree").get<int>();
    r.kappa = j.at("kappa").get<int>();
    r.lambda_max = j.at("lambda_max").get<double>();
    r.lambda_sq_minus_delta = j.at("lambda_sq_minus_delta").get<double>();
    r.components = j.at("components").get<std::uint64_t>();
    r.largest_component_edges = j.at("largest_component_edges").get<std::uint64_t>();
    r.converged = j.at("converged").get<bool>();
    r.star_law = j.at("star_law").get<bool>();
    for (const auto& [name, value] : j.at("checks").items()) {
      const auto c = parse_check(name);
      if (!c) throw std::runtime_error("unknown check '" + name + "' in result");
      r.checks[slot(*c)] = value.get<bool>();
    }
    if (j.contains("diagnostics")) {
      const auto& d = j["diagnostics"];
      r.diagnostics = DiagnosticCounts{d.at("two_step_v23").get<std::uint64_t>(), d.at("row_sum_v1").get<std::uint64_t>(),
                                       d.at("v3_into_v23").get<std::uint64_t>(), d.at("v3_internal").get<std::uint64_t>()};
    }
    if (j.contains("error")) r.error = j["error"].get<std::string>();
    result.records.push_back(std::move(r));
  }
  for (const auto& j : doc.at("summaries")) {
    DimensionSummary s;
    s.n = j.at("n").get<int>();
    s.p = j.at("p").get<double>();
    s.regime = j.at("regime").get<std::string>();
    s.metrics = j.at("metrics").get<std::map<std::string, double>>();
    result.summaries.push_back(std::move(s));
  }
  return result;
}

void emit(const ExperimentResult& result, std::ostream& out) {
  if (result.config.format == OutputFormat::csv)
    write_csv(out, result);
  else
    out << to_json(result).dump(2) << '\n';
}

void emit(const ExperimentResult& result, const std::filesystem::path& path, OutputFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == OutputFormat::csv)
    write_csv(out, result);
  else
    out << to_json(result).dump(2) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace cubespec
