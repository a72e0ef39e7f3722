#pragma once

// Random subgraphs G(Q^n, p) and their adjacency structure.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cubespec/hypercube.hpp"
#include "cubespec/probability.hpp"

namespace cubespec {

/// Compressed adjacency over the vertices that carry at least one edge.
/// Local index i refers to vertices()[i]; neighbor lists hold local indices
/// and are sorted, which also sorts them by global id.
class LocalGraph {
public:
  LocalGraph() : offsets_{0} {}

  /// Edges must be distinct with u < v; vertex ids are arbitrary.
  static LocalGraph from_edges(std::span<const Edge> edges);

  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }
  bool empty() const noexcept { return targets_.empty(); }

  Vertex vertex(std::size_t i) const noexcept { return vertices_[i]; }
  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const std::uint32_t> targets() const noexcept { return targets_; }

  std::size_t degree(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const noexcept {
    return {targets_.data() + offsets_[i], degree(i)};
  }

  std::optional<std::uint32_t> local_index(Vertex v) const noexcept;
  std::size_t degree_of(Vertex v) const noexcept;

  /// Edges (u < v, global ids) in ascending order.
  std::vector<Edge> edges() const;

private:
  std::vector<Vertex> vertices_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
};

/// One draw of G(Q^n, p). Immutable after construction.
class SubgraphSample {
public:
  /// Edge ids must be strictly increasing and valid for Q^n.
  static SubgraphSample from_edge_ids(Dimension n, EdgeProbability p, std::uint64_t seed,
                                      std::vector<EdgeId> edges);
  /// Builds a sample from explicit vertex pairs (any order, no duplicates).
  static SubgraphSample from_pairs(Dimension n, std::span<const Edge> pairs,
                                   EdgeProbability p = EdgeProbability(0.0),
                                   std::uint64_t seed = 0);

  Dimension dimension() const noexcept { return n_; }
  const EdgeProbability& probability() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const EdgeId> edge_ids() const noexcept { return ids_; }
  std::size_t edge_count() const noexcept { return ids_.size(); }
  const LocalGraph& graph() const noexcept { return graph_; }

  std::size_t degree(Vertex v) const noexcept { return graph_.degree_of(v); }
  /// Sorted neighbor ids of v in the sample.
  std::vector<Vertex> neighbors(Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const;

private:
  SubgraphSample(Dimension n, EdgeProbability p, std::uint64_t seed, std::vector<EdgeId> ids,
                 LocalGraph graph)
      : n_(n), p_(p), seed_(seed), ids_(std::move(ids)), graph_(std::move(graph)) {}

  Dimension n_;
  EdgeProbability p_;
  std::uint64_t seed_;
  std::vector<EdgeId> ids_;
  LocalGraph graph_;
};

enum class SamplingStrategy {
  automatic,
  sparse,      // binomial edge count, then distinct uniform ids
  dense,       // geometric gaps over the id range
  exhaustive,  // one counter-keyed draw per edge (reference, monotone in p)
};

double expected_edge_count(Dimension n, EdgeProbability p) noexcept;

/// Sparse when the expected edge count is below 2^n / 8.
SamplingStrategy choose_strategy(Dimension n, EdgeProbability p) noexcept;

SubgraphSample sample_subgraph(Dimension n, EdgeProbability p, std::uint64_t seed,
                               SamplingStrategy strategy = SamplingStrategy::automatic);

/// The per-edge uniform used by the exhaustive strategy; edge e is present
/// at probability p iff this value is < p.
double coupling_uniform(std::uint64_t seed, EdgeId e) noexcept;

/// Decode ascending edge ids; faster than per-id decode_edge on dense runs.
std::vector<Edge> decode_sorted(std::span<const EdgeId> ids, Dimension n);

}  // namespace cubespec
