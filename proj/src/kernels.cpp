#include "cubespec/kernels.hpp"

#include <algorithm>

#include "cubespec/sampler.hpp"

namespace cubespec::kernels {

namespace {

constexpr std::uint64_t kEdgeChunk = std::uint64_t{1} << 16;

inline double row_sum(const LocalGraph& g, std::span<const double> x, std::size_t i) {
  double s = 0.0;
  for (const auto j : g.neighbors(i)) s += x[j];
  return s;
}

inline double block_dot(std::span<const double> a, std::span<const double> b, std::size_t block) {
  const std::size_t lo = block * kReductionBlock;
  const std::size_t hi = std::min(a.size(), lo + kReductionBlock);
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
  return s;
}

inline void chunk_edges(std::uint64_t lo, std::uint64_t hi, double p, std::uint64_t seed,
                        std::vector<EdgeId>& out) {
  for (std::uint64_t e = lo; e < hi; ++e)
    if (coupling_uniform(seed, e) < p) out.push_back(e);
}

}  // namespace

void adjacency_apply_serial(const LocalGraph& g, std::span<const double> x, std::span<double> y) {
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) y[i] = row_sum(g, x, i);
}

void adjacency_apply(const LocalGraph& g, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(g.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (std::int64_t i = 0; i < n; ++i) y[i] = row_sum(g, x, static_cast<std::size_t>(i));
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
  const std::size_t blocks = (a.size() + kReductionBlock - 1) / kReductionBlock;
  double s = 0.0;
  for (std::size_t k = 0; k < blocks; ++k) s += block_dot(a, b, k);
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t blocks = (a.size() + kReductionBlock - 1) / kReductionBlock;
  if (blocks <= 2) return dot_serial(a, b);
  std::vector<double> partial(blocks);
  const auto nb = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < nb; ++k)
    partial[k] = block_dot(a, b, static_cast<std::size_t>(k));
  double s = 0.0;
  for (const double v : partial) s += v;
  return s;
}

std::vector<EdgeId> bernoulli_edges_serial(Dimension n, double p, std::uint64_t seed) {
  std::vector<EdgeId> out;
  chunk_edges(0, edge_count(n), p, seed, out);
  return out;
}

std::vector<EdgeId> bernoulli_edges(Dimension n, double p, std::uint64_t seed) {
  const std::uint64_t total = edge_count(n);
  const auto chunks = static_cast<std::int64_t>((total + kEdgeChunk - 1) / kEdgeChunk);
  std::vector<std::vector<EdgeId>> parts(chunks);
#pragma omp parallel for schedule(dynamic, 4) if (chunks > 1)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kEdgeChunk;
    chunk_edges(lo, std::min(total, lo + kEdgeChunk), p, seed, parts[c]);
  }
  std::vector<EdgeId> out;
  std::size_t size = 0;
  for (const auto& part : parts) size += part.size();
  out.reserve(size);
  for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

}  // namespace cubespec::kernels
