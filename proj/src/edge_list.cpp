#include "cubespec/edge_list.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cubespec/format.hpp"

namespace cubespec {

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw FormatError("line " + std::to_string(line) + ": bad " + std::string(what) + " '" +
                      std::string(text) + "'");
  return value;
}

std::string_view field(std::string_view token, std::string_view key, std::size_t line) {
  if (!token.starts_with(key) || token.size() <= key.size() || token[key.size()] != '=')
    throw FormatError("line " + std::to_string(line) + ": expected " + std::string(key) + "=...");
  return token.substr(key.size() + 1);
}

}  // namespace

void write_edge_list(std::ostream& out, const SubgraphSample& sample) {
  out << "cube-subgraph v1 n=" << sample.dimension().value()
      << " p=" << format_shortest(sample.probability().value()) << " seed=" << sample.seed()
      << '\n';
  for (const auto& e : decode_sorted(sample.edge_ids(), sample.dimension()))
    out << e.u << ' ' << e.v << '\n';
}

SubgraphSample read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty edge-list file");
  std::istringstream header(line);
  std::string magic, version, tn, tp, ts, extra;
  header >> magic >> version >> tn >> tp >> ts;
  if (magic != "cube-subgraph" || version != "v1")
    throw FormatError("line 1: expected 'cube-subgraph v1' header");
  if (header >> extra) throw FormatError("line 1: trailing header content");
  const int n_raw = parse_number<int>(field(tn, "n", 1), "dimension", 1);
  const double p_raw = parse_number<double>(field(tp, "p", 1), "probability", 1);
  const auto seed = parse_number<std::uint64_t>(field(ts, "seed", 1), "seed", 1);

  if (n_raw < 1 || n_raw > kMaxDimension)
    throw FormatError("line 1: dimension " + std::to_string(n_raw) + " outside [1, " +
                      std::to_string(kMaxDimension) + "]");
  if (!(p_raw >= 0.0 && p_raw <= 1.0)) throw FormatError("line 1: probability outside [0, 1]");
  const Dimension n(n_raw);
  const EdgeProbability p(p_raw);
  std::vector<EdgeId> ids;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw FormatError("line " + std::to_string(lineno) + ": expected 'u v'");
    const std::string_view view(line);
    const auto u = parse_number<Vertex>(view.substr(0, sp), "vertex", lineno);
    const auto v = parse_number<Vertex>(view.substr(sp + 1), "vertex", lineno);
    if (u >= v) throw FormatError("line " + std::to_string(lineno) + ": requires u < v");
    if (!n.contains(v) || !is_cube_edge(u, v))
      throw FormatError("line " + std::to_string(lineno) + ": not an edge of Q^" +
                        std::to_string(n.value()));
    const EdgeId e = encode_edge(Edge{u, v}, n);
    if (!ids.empty() && e <= ids.back())
      throw FormatError("line " + std::to_string(lineno) + ": edges not in ascending id order");
    ids.push_back(e);
  }
  return SubgraphSample::from_edge_ids(n, p, seed, std::move(ids));
}

void save_edge_list(const std::filesystem::path& path, const SubgraphSample& sample) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_edge_list(out, sample);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SubgraphSample load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_edge_list(in);
}

}  // namespace cubespec
