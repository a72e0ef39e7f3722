#include "cubespec/hypercube.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace cubespec {

Dimension::Dimension(int n) : n_(n) {
  if (n < 1 || n > kMaxDimension)
    throw DomainError("cube dimension must be in [1, 30], got " + std::to_string(n));
}

std::vector<Vertex> neighbors(Vertex v, Dimension n) {
  if (!n.contains(v))
    throw DomainError("vertex " + std::to_string(v) + " outside Q^" + std::to_string(n.value()));
  std::vector<Vertex> out;
  out.reserve(n.value());
  for (int i = 0; i < n.value(); ++i) out.push_back(v ^ (Vertex{1} << i));
  return out;
}

std::uint64_t edge_count(Dimension n) noexcept {
  return static_cast<std::uint64_t>(n.value()) << (n.value() - 1);
}

namespace {

// Total number of set bits over all integers in [0, v).
std::uint64_t popcount_prefix(std::uint64_t v, int n) noexcept {
  std::uint64_t total = 0;
  for (int b = 0; b < n; ++b) {
    const std::uint64_t period = std::uint64_t{1} << (b + 1);
    const std::uint64_t half = std::uint64_t{1} << b;
    total += (v / period) * half;
    const std::uint64_t rem = v % period;
    if (rem > half) total += rem - half;
  }
  return total;
}

}  // namespace

std::uint64_t edges_before_vertex(std::uint64_t v, Dimension n) noexcept {
  return static_cast<std::uint64_t>(n.value()) * v - popcount_prefix(v, n.value());
}

EdgeId encode_edge(Vertex v, int bit, Dimension n) {
  if (!n.contains(v) || bit < 0 || bit >= n.value())
    throw DomainError("edge endpoint or bit out of range");
  if ((v >> bit) & 1u)
    throw DomainError("encode_edge requires bit " + std::to_string(bit) + " of " +
                      std::to_string(v) + " to be clear");
  const Vertex below = v & ((Vertex{1} << bit) - 1);
  const int clear_below = bit - std::popcount(below);
  return edges_before_vertex(v, n) + static_cast<EdgeId>(clear_below);
}

EdgeId encode_edge(Edge e, Dimension n) {
  if (!n.contains(e.u) || !n.contains(e.v) || !is_cube_edge(e.u, e.v))
    throw DomainError("not an edge of Q^" + std::to_string(n.value()));
  const Vertex lo = std::min(e.u, e.v);
  const int bit = std::countr_zero(e.u ^ e.v);
  return encode_edge(lo, bit, n);
}

std::pair<Vertex, int> decode_edge_bit(EdgeId e, Dimension n) {
  if (e >= edge_count(n))
    throw DomainError("edge id " + std::to_string(e) + " out of range for Q^" +
                      std::to_string(n.value()));
  // Largest v with edges_before_vertex(v) <= e.
  std::uint64_t lo = 0, hi = n.vertex_count() - 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (edges_before_vertex(mid, n) <= e)
      lo = mid;
    else
      hi = mid - 1;
  }
  const auto v = static_cast<Vertex>(lo);
  auto rank = e - edges_before_vertex(lo, n);
  for (int i = 0; i < n.value(); ++i) {
    if ((v >> i) & 1u) continue;
    if (rank == 0) return {v, i};
    --rank;
  }
  throw std::logic_error("decode_edge: inconsistent prefix count");
}

Edge decode_edge(EdgeId e, Dimension n) {
  const auto [v, bit] = decode_edge_bit(e, n);
  return {v, v | (Vertex{1} << bit)};
}

int fixed_bits_for(Dimension n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("subcube alpha must lie in (0, 1)");
  const int f = static_cast<int>(std::floor(alpha * n.value()));
  if (f < 1)
    throw DomainError("degenerate subcube decomposition: floor(alpha*n) = 0");
  return f;
}

std::vector<Subcube> subcube_decompose(Dimension n, double alpha) {
  const int f = fixed_bits_for(n, alpha);
  std::vector<Subcube> out;
  out.reserve(std::size_t{1} << f);
  for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << f); ++prefix)
    out.push_back({f, prefix, n.value() - f});
  return out;
}

}  // namespace cubespec
