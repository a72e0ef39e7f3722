#include "cubespec/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <unordered_set>

#include "cubespec/kernels.hpp"
#include "cubespec/random.hpp"

namespace cubespec {

namespace {

constexpr std::uint64_t kDenseKey = 0x6a09e667f3bcc909ull;
constexpr std::uint64_t kCouplingKey = 0xbb67ae8584caa73bull;

std::vector<EdgeId> sparse_ids(Dimension n, double p, std::uint64_t seed) {
  const std::uint64_t total = edge_count(n);
  rng::Stream stream(seed);
  const std::uint64_t count = rng::binomial(stream, total, p);
  std::unordered_set<EdgeId> chosen;
  chosen.reserve(count * 2);
  std::vector<EdgeId> ids;
  ids.reserve(count);
  while (ids.size() < count) {
    const EdgeId e = stream.below(total);
    if (chosen.insert(e).second) ids.push_back(e);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Skip sampling: the gap before the next present edge is geometric. The
// uniform for the gap that starts at position `next` is keyed by `next`.
std::vector<EdgeId> dense_ids(Dimension n, double p, std::uint64_t seed) {
  const std::uint64_t total = edge_count(n);
  std::vector<EdgeId> ids;
  if (p <= 0.0) return ids;
  if (p >= 1.0) {
    ids.resize(total);
    for (std::uint64_t e = 0; e < total; ++e) ids[e] = e;
    return ids;
  }
  ids.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.05) + 16);
  const double log_q = std::log1p(-p);
  const std::uint64_t key = seed ^ kDenseKey;
  std::uint64_t next = 0;
  while (next < total) {
    const double u = rng::to_unit_open_left(rng::counter_bits(key, next));
    const double gap = std::floor(std::log(u) / log_q);
    if (gap >= static_cast<double>(total - next)) break;
    const std::uint64_t e = next + static_cast<std::uint64_t>(gap);
    ids.push_back(e);
    next = e + 1;
  }
  return ids;
}

}  // namespace

// LocalGraph -----------------------------------------------------------------

LocalGraph LocalGraph::from_edges(std::span<const Edge> edges) {
  LocalGraph g;
  g.vertices_.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    g.vertices_.push_back(e.u);
    g.vertices_.push_back(e.v);
  }
  std::sort(g.vertices_.begin(), g.vertices_.end());
  g.vertices_.erase(std::unique(g.vertices_.begin(), g.vertices_.end()), g.vertices_.end());

  const auto index = [&](Vertex v) {
    return static_cast<std::uint32_t>(
        std::lower_bound(g.vertices_.begin(), g.vertices_.end(), v) - g.vertices_.begin());
  };
  std::vector<std::uint32_t> lu(edges.size()), lv(edges.size());
  g.offsets_.assign(g.vertices_.size() + 1, 0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    lu[k] = index(edges[k].u);
    lv[k] = index(edges[k].v);
    ++g.offsets_[lu[k] + 1];
    ++g.offsets_[lv[k] + 1];
  }
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.resize(edges.size() * 2);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    g.targets_[cursor[lu[k]]++] = lv[k];
    g.targets_[cursor[lv[k]]++] = lu[k];
  }
  for (std::size_t i = 0; i < g.vertices_.size(); ++i)
    std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  return g;
}

std::optional<std::uint32_t> LocalGraph::local_index(Vertex v) const noexcept {
  const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<std::uint32_t>(it - vertices_.begin());
}

std::size_t LocalGraph::degree_of(Vertex v) const noexcept {
  const auto i = local_index(v);
  return i ? degree(*i) : 0;
}

std::vector<Edge> LocalGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < size(); ++i)
    for (const auto j : neighbors(i))
      if (j > i) out.push_back({vertices_[i], vertices_[j]});
  return out;
}

// SubgraphSample -------------------------------------------------------------

std::vector<Edge> decode_sorted(std::span<const EdgeId> ids, Dimension n) {
  std::vector<Edge> out;
  out.reserve(ids.size());
  const int dim = n.value();
  std::uint64_t v = 0;
  std::uint64_t before = 0;  // edges_before_vertex(v)
  for (const EdgeId e : ids) {
    if (e >= edge_count(n)) throw DomainError("edge id " + std::to_string(e) + " out of range");
    int steps = 0;
    while (steps < 64 && e >= before + static_cast<std::uint64_t>(dim - std::popcount(v))) {
      before += static_cast<std::uint64_t>(dim - std::popcount(v));
      ++v;
      ++steps;
    }
    if (steps == 64) {
      const auto [lo, bit] = decode_edge_bit(e, n);
      v = lo;
      before = edges_before_vertex(v, n);
    }
    auto rank = e - before;
    const auto vv = static_cast<Vertex>(v);
    for (int i = 0; i < dim; ++i) {
      if ((vv >> i) & 1u) continue;
      if (rank-- == 0) {
        out.push_back({vv, vv | (Vertex{1} << i)});
        break;
      }
    }
  }
  return out;
}

SubgraphSample SubgraphSample::from_edge_ids(Dimension n, EdgeProbability p, std::uint64_t seed,
                                             std::vector<EdgeId> edges) {
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (edges[k] <= edges[k - 1])
      throw DomainError("edge ids must be strictly increasing (position " + std::to_string(k) + ")");
  auto pairs = decode_sorted(edges, n);
  auto graph = LocalGraph::from_edges(pairs);
  return {n, p, seed, std::move(edges), std::move(graph)};
}

SubgraphSample SubgraphSample::from_pairs(Dimension n, std::span<const Edge> pairs,
                                          EdgeProbability p, std::uint64_t seed) {
  std::vector<EdgeId> ids;
  ids.reserve(pairs.size());
  for (const auto& e : pairs) ids.push_back(encode_edge(e, n));
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw DomainError("duplicate edge in edge list");
  return from_edge_ids(n, p, seed, std::move(ids));
}

std::vector<Vertex> SubgraphSample::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  if (const auto i = graph_.local_index(v))
    for (const auto j : graph_.neighbors(*i)) out.push_back(graph_.vertex(j));
  return out;
}

bool SubgraphSample::has_edge(Vertex u, Vertex v) const {
  if (!n_.contains(u) || !n_.contains(v) || !is_cube_edge(u, v)) return false;
  return std::binary_search(ids_.begin(), ids_.end(), encode_edge(Edge{u, v}, n_));
}

// Sampling -------------------------------------------------------------------

double expected_edge_count(Dimension n, EdgeProbability p) noexcept {
  return p.value() * static_cast<double>(edge_count(n));
}

SamplingStrategy choose_strategy(Dimension n, EdgeProbability p) noexcept {
  return expected_edge_count(n, p) < static_cast<double>(n.vertex_count()) / 8.0
             ? SamplingStrategy::sparse
             : SamplingStrategy::dense;
}

double coupling_uniform(std::uint64_t seed, EdgeId e) noexcept {
  return rng::to_unit(rng::counter_bits(seed ^ kCouplingKey, e));
}

SubgraphSample sample_subgraph(Dimension n, EdgeProbability p, std::uint64_t seed,
                               SamplingStrategy strategy) {
  if (strategy == SamplingStrategy::automatic) strategy = choose_strategy(n, p);
  std::vector<EdgeId> ids;
  switch (strategy) {
    case SamplingStrategy::sparse: ids = sparse_ids(n, p.value(), seed); break;
    case SamplingStrategy::dense: ids = dense_ids(n, p.value(), seed); break;
    case SamplingStrategy::exhaustive: ids = kernels::bernoulli_edges(n, p.value(), seed); break;
    case SamplingStrategy::automatic: break;
  }
  return SubgraphSample::from_edge_ids(n, p, seed, std::move(ids));
}

}  // namespace cubespec
