#include "cubespec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace cubespec {

DegreeProfile degree_profile(const SubgraphSample& sample) {
  const auto& g = sample.graph();
  DegreeProfile out;
  out.histogram.assign(static_cast<std::size_t>(sample.dimension().value()) + 1, 0);
  out.histogram[0] = sample.dimension().vertex_count() - g.size();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto d = g.degree(i);
    ++out.histogram[d];
    out.max_degree = std::max(out.max_degree, static_cast<int>(d));
  }
  out.total_edges = sample.edge_count();
  return out;
}

std::uint64_t tail_count(const DegreeProfile& profile, int k) {
  const int n = static_cast<int>(profile.histogram.size()) - 1;
  if (k < 0 || k > n + 1)
    throw DomainError("tail_count: k = " + std::to_string(k) + " outside [0, n+1]");
  std::uint64_t total = 0;
  for (int d = k; d <= n; ++d) total += profile.histogram[d];
  return total;
}

// Components -----------------------------------------------------------------

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) x = std::exchange(parent_[x], root);
    return root;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

}  // namespace

std::uint64_t ComponentCensus::count_with_edges(std::uint64_t k) const noexcept {
  return static_cast<std::uint64_t>(std::count_if(
      components.begin(), components.end(), [k](const auto& c) { return c.edge_count == k; }));
}

const ComponentSummary* ComponentCensus::largest() const noexcept {
  const ComponentSummary* best = nullptr;
  for (const auto& c : components)
    if (!best || c.edge_count > best->edge_count) best = &c;
  return best;
}

bool ComponentCensus::is_forest() const noexcept {
  return std::all_of(components.begin(), components.end(), [](const auto& c) { return c.is_tree; });
}

ComponentCensus components(const SubgraphSample& sample) {
  const auto& g = sample.graph();
  DisjointSets sets(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto j : g.neighbors(i))
      if (j > i) sets.unite(static_cast<std::uint32_t>(i), j);

  // Local indices ascend with vertex id, so first-seen order is by smallest vertex.
  std::vector<std::int64_t> slot(g.size(), -1);
  ComponentCensus out;
  out.isolated_vertices = sample.dimension().vertex_count() - g.size();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto root = sets.find(static_cast<std::uint32_t>(i));
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(out.components.size());
      out.components.push_back({});
      out.components.back().smallest_vertex = g.vertex(i);
    }
    auto& c = out.components[static_cast<std::size_t>(slot[root])];
    ++c.vertex_count;
    c.max_degree = std::max(c.max_degree, static_cast<int>(g.degree(i)));
    for (const auto j : g.neighbors(i))
      if (j > i) c.edges.push_back({g.vertex(i), g.vertex(j)});
  }
  for (auto& c : out.components) {
    c.edge_count = c.edges.size();
    c.is_tree = c.edge_count + 1 == c.vertex_count;
    c.is_star = c.is_tree && static_cast<std::uint64_t>(c.max_degree) + 1 == c.vertex_count;
    if (c.is_star) c.lambda_max_exact = std::sqrt(static_cast<double>(c.edge_count));
  }
  return out;
}

// Subcube census -------------------------------------------------------------

SubcubeCensus subcube_high_degree_census(const SubgraphSample& sample, double alpha, int threshold) {
  const Dimension n = sample.dimension();
  const int fixed = fixed_bits_for(n, alpha);
  const int free_dim = n.value() - fixed;
  const auto& g = sample.graph();

  SubcubeCensus out;
  if (threshold <= 0) {
    out.qualifying_subcubes = std::uint64_t{1} << fixed;
    out.high_degree_vertices = n.vertex_count();
  }
  const Vertex low_mask = (Vertex{1} << free_dim) - 1;
  std::map<std::uint64_t, int> induced;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vertex v = g.vertex(i);
    int inside = 0;
    for (const auto j : g.neighbors(i))
      if (((g.vertex(j) ^ v) & ~low_mask) == 0) ++inside;
    if (inside > 0) {
      auto& best = induced[v >> free_dim];
      best = std::max(best, inside);
    }
    if (threshold > 0 && static_cast<int>(g.degree(i)) >= threshold) ++out.high_degree_vertices;
  }
  for (const auto& [prefix, degree] : induced) {
    out.nonempty_subcubes.emplace_back(prefix, degree);
    if (threshold > 0 && degree >= threshold) ++out.qualifying_subcubes;
  }
  return out;
}

// JSON -----------------------------------------------------------------------

void to_json(nlohmann::json& j, const DegreeProfile& profile) {
  j = nlohmann::json{{"histogram", profile.histogram},
                     {"max_degree", profile.max_degree},
                     {"total_edges", profile.total_edges}};
}

void from_json(const nlohmann::json& j, DegreeProfile& profile) {
  j.at("histogram").get_to(profile.histogram);
  j.at("max_degree").get_to(profile.max_degree);
  j.at("total_edges").get_to(profile.total_edges);
}

void to_json(nlohmann::json& j, const ComponentSummary& c) {
  j = nlohmann::json{{"smallest_vertex", c.smallest_vertex},
                     {"vertex_count", c.vertex_count},
                     {"edge_count", c.edge_count},
                     {"is_tree", c.is_tree},
                     {"is_star", c.is_star},
                     {"lambda_max_exact", nullptr}};
  if (c.lambda_max_exact) j["lambda_max_exact"] = *c.lambda_max_exact;
}

nlohmann::ordered_json census_to_json(const DegreeProfile& profile, const ComponentCensus& census) {
  nlohmann::ordered_json j;
  j["degree_profile"] = {{"histogram", profile.histogram},
                         {"max_degree", profile.max_degree},
                         {"total_edges", profile.total_edges}};
  j["isolated_vertices"] = census.isolated_vertices;
  auto& list = j["components"] = nlohmann::ordered_json::array();
  for (const auto& c : census.components) {
    nlohmann::ordered_json item;
    item["smallest_vertex"] = c.smallest_vertex;
    item["vertex_count"] = c.vertex_count;
    item["edge_count"] = c.edge_count;
    item["is_tree"] = c.is_tree;
    item["is_star"] = c.is_star;
    item["lambda_max_exact"] = c.lambda_max_exact ? nlohmann::ordered_json(*c.lambda_max_exact)
                                                  : nlohmann::ordered_json(nullptr);
    list.push_back(std::move(item));
  }
  return j;
}

}  // namespace cubespec
