#include "cubespec/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "cubespec/format.hpp"

namespace cubespec {

namespace {

constexpr std::string_view kCheckNames[] = {
    "lambda_vs_sqrt_delta", "delta_vs_kappa",       "empty_prob",     "decomposition_bound",
    "lemma9",               "two_step_diagnostics", "subcube_census",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view key, std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return std::string(s.substr(1, s.size() - 2));
  if (s.find('"') != std::string_view::npos) throw ConfigError(std::string(key), "unbalanced quotes");
  return std::string(s);
}

std::vector<std::string> list_items(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value.empty() || value.front() != '[') return {unquote(key, value)};
  if (value.back() != ']') throw ConfigError(std::string(key), "list is missing ']'");
  std::vector<std::string> out;
  std::string_view body = trim(value.substr(1, value.size() - 2));
  if (body.empty()) return out;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i < body.size() && body[i] == '"') quoted = !quoted;
    if (i == body.size() || (body[i] == ',' && !quoted)) {
      const auto item = trim(body.substr(start, i - start));
      if (item.empty()) throw ConfigError(std::string(key), "empty list item");
      out.push_back(unquote(key, item));
      start = i + 1;
    }
  }
  return out;
}

template <typename T>
T number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  return value;
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

std::string_view to_string(Check c) noexcept { return kCheckNames[static_cast<int>(c)]; }

std::optional<Check> parse_check(std::string_view name) noexcept {
  for (std::size_t i = 0; i < std::size(kCheckNames); ++i)
    if (kCheckNames[i] == name) return static_cast<Check>(i);
  return std::nullopt;
}

bool ExperimentConfig::has(Check c) const noexcept {
  return std::find(checks.begin(), checks.end(), c) != checks.end();
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": missing key");
    if (!entries.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
      throw ConfigError(key, "given more than once");
  }

  ExperimentConfig c;
  const auto take = [&](std::string_view key) -> std::optional<std::string> {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    auto value = it->second;
    entries.erase(it);
    return value;
  };

  const auto n_values = take("n_values");
  if (!n_values) throw ConfigError("n_values", "required");
  for (const auto& item : list_items("n_values", *n_values)) {
    const int n = number<int>("n_values", item);
    if (n < 1 || n > kMaxDimension)
      throw ConfigError("n_values", "n = " + item + " outside [1, " + std::to_string(kMaxDimension) + "]");
    c.n_values.push_back(n);
  }
  if (c.n_values.empty()) throw ConfigError("n_values", "must list at least one dimension");

  const auto family = take("family");
  if (!family) throw ConfigError("family", "required");
  try {
    c.family = ProbabilityFamily::parse(unquote("family", *family));
  } catch (const DomainError& e) {
    throw ConfigError("family", e.what());
  }
  for (const int n : c.n_values) {
    try {
      (void)c.family.at(n);
    } catch (const DomainError& e) {
      throw ConfigError("family", e.what());
    }
  }

  if (const auto v = take("trials")) {
    const auto t = number<std::int64_t>("trials", *v);
    if (t < 1 || t > std::int64_t{1} << 31) throw ConfigError("trials", "must be at least 1");
    c.trials = static_cast<std::uint32_t>(t);
  }
  if (const auto v = take("base_seed")) c.base_seed = number<std::uint64_t>("base_seed", *v);
  if (const auto v = take("checks")) {
    for (const auto& item : list_items("checks", *v)) {
      const auto check = parse_check(item);
      if (!check) throw ConfigError("checks", "unknown check '" + item + "'");
      if (!c.has(*check)) c.checks.push_back(*check);
    }
  }
  if (const auto v = take("tolerance")) {
    c.tolerance = number<double>("tolerance", *v);
    if (!(c.tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
  }
  if (const auto v = take("output")) c.output = unquote("output", *v);
  if (const auto v = take("format")) {
    const auto f = unquote("format", *v);
    if (f == "csv")
      c.format = OutputFormat::csv;
    else if (f == "json")
      c.format = OutputFormat::json;
    else
      throw ConfigError("format", "expected csv or json, got '" + f + "'");
  }
  if (const auto v = take("threads")) {
    c.threads = number<int>("threads", *v);
    if (c.threads < 0) throw ConfigError("threads", "must be 0 or positive");
  }
  if (const auto v = take("scale")) {
    const auto s = unquote("scale", *v);
    if (s == "polynomial")
      c.scale = PartitionScale::polynomial;
    else if (s == "exponential")
      c.scale = PartitionScale::exponential;
    else
      throw ConfigError("scale", "expected polynomial or exponential, got '" + s + "'");
  }
  if (const auto v = take("alpha")) {
    c.alpha = number<double>("alpha", *v);
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
  }
  if (const auto v = take("lemma9_min_degree")) {
    c.lemma9_min_degree = number<int>("lemma9_min_degree", *v);
    if (c.lemma9_min_degree < 1) throw ConfigError("lemma9_min_degree", "must be at least 1");
  }

  if (!entries.empty()) throw ConfigError(entries.begin()->first, "unknown key");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "n_values = [";
  for (std::size_t i = 0; i < c.n_values.size(); ++i) out << (i ? ", " : "") << c.n_values[i];
  out << "]\n";
  out << "family = \"" << c.family.describe() << "\"\n";
  out << "trials = " << c.trials << '\n';
  out << "base_seed = " << c.base_seed << '\n';
  out << "checks = [";
  for (std::size_t i = 0; i < c.checks.size(); ++i) out << (i ? ", " : "") << to_string(c.checks[i]);
  out << "]\n";
  out << "tolerance = " << format_shortest(c.tolerance) << '\n';
  if (!c.output.empty()) out << "output = \"" << c.output << "\"\n";
  out << "format = " << (c.format == OutputFormat::csv ? "csv" : "json") << '\n';
  out << "threads = " << c.threads << '\n';
  out << "scale = " << (c.scale == PartitionScale::polynomial ? "polynomial" : "exponential") << '\n';
  out << "alpha = " << format_shortest(c.alpha) << '\n';
  out << "lemma9_min_degree = " << c.lemma9_min_degree << '\n';
  return out.str();
}

}  // namespace cubespec
