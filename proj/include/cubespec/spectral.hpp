#pragma once

// Largest adjacency eigenvalue of a sample, dense reference spectra and the
// certificates built on them.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cubespec/partition.hpp"
#include "cubespec/sampler.hpp"

namespace cubespec {

class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidCertificate : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class SpectralMethod { power_on_A_squared, dense_reference, exact_star };

std::string_view to_string(SpectralMethod method) noexcept;

struct SpectralEstimate {
  double value = 0.0;
  SpectralMethod method = SpectralMethod::power_on_A_squared;
  int iterations = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool converged = true;
};

void to_json(nlohmann::json& j, const SpectralEstimate& e);

struct PowerOptions {
  double tolerance = 1e-10;
  int max_iterations = 0;  // 0: 50 n log(2^n)
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDenseCap = 4096;

int default_max_iterations(int n) noexcept;

/// Power iteration on A^2. Stops when the relative change of the Rayleigh
/// quotient falls below max(tol^2, 1e-15) and the relative residual
/// ||A^2 x - theta x|| / theta falls below tol. On overrun the best estimate
/// is returned with converged == false.
SpectralEstimate power_iteration(const LocalGraph& graph, const PowerOptions& options, int max_iterations);

/// Largest eigenvalue, taking the maximum over connected components: stars
/// exactly, everything else by power_iteration. `iterations` is the total
/// over the components that were solved.
SpectralEstimate lambda_max(const SubgraphSample& sample, const PowerOptions& options = {});
SpectralEstimate lambda_max(const LocalGraph& graph, const PowerOptions& options, int max_iterations);

/// All 2^n eigenvalues, descending. Refuses 2^n > 4096.
std::vector<double> dense_spectrum(const SubgraphSample& sample);
/// Eigenvalues of the adjacency on the graph's own vertex set (no padding).
std::vector<double> dense_eigenvalues(const LocalGraph& graph);
/// Eigenvalues of A^2 formed explicitly, padded with zeros to 2^n, descending.
std::vector<double> dense_square_spectrum(const SubgraphSample& sample);
/// Generic symmetric solver; `matrix` is row-major dim x dim. Descending.
std::vector<double> symmetric_eigenvalues(std::span<const double> matrix, std::size_t dim);

/// True iff spectrum[k] = -spectrum[m-1-k] within tol for all k.
bool symmetry_check(std::span<const double> spectrum, double tol);

/// Connected edge set. Stars are solved exactly, anything else iteratively.
SpectralEstimate component_lambda_max(std::span<const Edge> edges, const PowerOptions& options = {});

struct DecompositionBound {
  SpectralEstimate whole;
  std::array<SpectralEstimate, 6> parts;  // G[V1], G[V2], G[V3], V1-V2, V1-V3, V2-V3
  std::array<std::size_t, 6> part_edges{};
  double sum = 0.0;
  bool holds = false;
};

/// The six-piece bound lambda(G) <= sum_i lambda(G_i) + 6 tol. Dense
/// eigensolves when 2^n <= 4096, power iteration otherwise.
DecompositionBound decomposition_bound(const SubgraphSample& sample,
                                       const VertexPartition& partition,
                                       const PowerOptions& options = {});

/// Sum over y != x with target(y) of (A^2)(x, y).
std::uint64_t two_step_count(const SubgraphSample& sample, Vertex x,
                             const std::function<bool(Vertex)>& target);
/// Sum over all y of (A^2)(x, y) = sum of neighbor degrees.
std::uint64_t row_sum_A2(const SubgraphSample& sample, Vertex x);

/// Eigenvalues >= lambda - 1e-9.
std::size_t eigenvalue_count_at_least(std::span<const double> spectrum, double lambda);

struct EigenvalueCountCertificate {
  std::vector<Vertex> family;
  double rayleigh_floor = 0.0;  // min degree over the family; 0 when empty
  std::size_t certified_count = 0;
};

/// Validates that family members are pairwise at distance > 2 in the sample
/// (non-adjacent, no common neighbour), so their delta functions are A^2
/// orthogonal. Throws InvalidCertificate otherwise.
EigenvalueCountCertificate lemma9_certificate(const SubgraphSample& sample,
                                              std::vector<Vertex> family);

/// Greedy selection from `candidates` (in the given order) keeping members
/// pairwise at distance > 2 in the sample.
std::vector<Vertex> thin_certificate_family(const SubgraphSample& sample,
                                            std::span<const Vertex> candidates);

/// certified_count <= eigenvalue_count_at_least(A^2 spectrum, rayleigh_floor).
bool certificate_holds(const EigenvalueCountCertificate& cert,
                       std::span<const double> square_spectrum);

}  // namespace cubespec
