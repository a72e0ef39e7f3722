#pragma once

// Data-parallel inner loops. Each kernel has a plain serial version used as
// the reference in tests and benchmarks, and an OpenMP version whose output
// is bitwise identical to the serial one for any thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "cubespec/hypercube.hpp"

namespace cubespec {
class LocalGraph;
}

namespace cubespec::kernels {

/// Reductions are split into fixed blocks of this many entries and the block
/// partials are summed in order, so the result does not depend on threads.
inline constexpr std::size_t kReductionBlock = 4096;

/// y = A x over the local vertex set.
void adjacency_apply_serial(const LocalGraph& g, std::span<const double> x, std::span<double> y);
void adjacency_apply(const LocalGraph& g, std::span<const double> x, std::span<double> y);

double dot_serial(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

/// Edge ids e in [0, edge_count(n)) with coupling_uniform(seed, e) < p.
std::vector<EdgeId> bernoulli_edges_serial(Dimension n, double p, std::uint64_t seed);
std::vector<EdgeId> bernoulli_edges(Dimension n, double p, std::uint64_t seed);

}  // namespace cubespec::kernels
