#pragma once

// Topology of the n-cube: vertices are bitmasks, edges flip a single bit.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cubespec {

using Vertex = std::uint32_t;
using EdgeId = std::uint64_t;

class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxDimension = 30;

/// Dimension n of Q^n, validated to 1 <= n <= 30.
class Dimension {
public:
  explicit Dimension(int n);

  int value() const noexcept { return n_; }
  std::uint64_t vertex_count() const noexcept { return std::uint64_t{1} << n_; }
  bool contains(std::uint64_t v) const noexcept { return v < vertex_count(); }

  friend bool operator==(Dimension, Dimension) = default;

private:
  int n_;
};

struct Edge {
  Vertex u;  // u < v
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A subcube fixes the high `fixed_bits` coordinates to `prefix`.
struct Subcube {
  int fixed_bits = 0;
  std::uint64_t prefix = 0;
  int free_dimension = 0;

  Vertex first_vertex() const noexcept {
    return static_cast<Vertex>(prefix << free_dimension);
  }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << free_dimension; }
  bool contains(Vertex v) const noexcept { return (v >> free_dimension) == prefix; }
};

std::vector<Vertex> neighbors(Vertex v, Dimension n);

std::uint64_t edge_count(Dimension n) noexcept;

/// Number of (v', i) pairs with bit i of v' clear and v' < v.
std::uint64_t edges_before_vertex(std::uint64_t v, Dimension n) noexcept;

EdgeId encode_edge(Vertex v, int bit, Dimension n);
EdgeId encode_edge(Edge e, Dimension n);

/// Lower endpoint and flipped bit of an edge id.
std::pair<Vertex, int> decode_edge_bit(EdgeId e, Dimension n);
Edge decode_edge(EdgeId e, Dimension n);

/// Floor of alpha * n, the number of fixed high-order bits.
int fixed_bits_for(Dimension n, double alpha);

std::vector<Subcube> subcube_decompose(Dimension n, double alpha);

inline bool is_cube_edge(Vertex u, Vertex v) noexcept {
  const auto d = u ^ v;
  return d != 0 && (d & (d - 1)) == 0;
}

}  // namespace cubespec
