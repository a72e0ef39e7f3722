#pragma once

// Degree statistics and component structure of a sample.

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cubespec/sampler.hpp"

namespace cubespec {

struct DegreeProfile {
  std::vector<std::uint64_t> histogram;  // indexed by degree, size n + 1
  int max_degree = 0;
  std::uint64_t total_edges = 0;
};

DegreeProfile degree_profile(const SubgraphSample& sample);

/// X_k: number of vertices of degree >= k, for 0 <= k <= n + 1.
std::uint64_t tail_count(const DegreeProfile& profile, int k);

struct ComponentSummary {
  Vertex smallest_vertex = 0;
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  int max_degree = 0;
  bool is_tree = false;
  bool is_star = false;
  std::optional<double> lambda_max_exact;  // sqrt(edge_count) for stars
  std::vector<Edge> edges;
};

/// Components with at least one edge, ordered by smallest vertex, plus the
/// number of isolated vertices.
struct ComponentCensus {
  std::vector<ComponentSummary> components;
  std::uint64_t isolated_vertices = 0;

  /// Y_k: number of components with exactly k edges.
  std::uint64_t count_with_edges(std::uint64_t k) const noexcept;
  const ComponentSummary* largest() const noexcept;
  bool is_forest() const noexcept;
};

ComponentCensus components(const SubgraphSample& sample);

struct SubcubeCensus {
  std::uint64_t qualifying_subcubes = 0;      // induced max degree >= threshold
  std::uint64_t high_degree_vertices = 0;     // full-graph degree >= threshold
  // (prefix, induced max degree) for subcubes holding at least one induced
  // edge, by ascending prefix
  std::vector<std::pair<std::uint64_t, int>> nonempty_subcubes;
};

SubcubeCensus subcube_high_degree_census(const SubgraphSample& sample, double alpha, int threshold);

void to_json(nlohmann::json& j, const DegreeProfile& profile);
void from_json(const nlohmann::json& j, DegreeProfile& profile);
void to_json(nlohmann::json& j, const ComponentSummary& summary);
nlohmann::ordered_json census_to_json(const DegreeProfile& profile, const ComponentCensus& census);

}  // namespace cubespec
