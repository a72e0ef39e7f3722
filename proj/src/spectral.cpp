#include "cubespec/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include <Eigen/Dense>

#include "cubespec/kernels.hpp"
#include "cubespec/random.hpp"

namespace cubespec {

std::string_view to_string(SpectralMethod method) noexcept {
  switch (method) {
    case SpectralMethod::power_on_A_squared: return "power_on_A_squared";
    case SpectralMethod::dense_reference: return "dense_reference";
    case SpectralMethod::exact_star: return "exact_star";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const SpectralEstimate& e) {
  j = nlohmann::json{{"value", e.value},
                     {"method", std::string(to_string(e.method))},
                     {"iterations", e.iterations},
                     {"residual", e.residual},
                     {"tolerance", e.tolerance},
                     {"converged", e.converged}};
}

int default_max_iterations(int n) noexcept {
  return std::max(100, static_cast<int>(std::ceil(50.0 * n * n * std::log(2.0))));
}

// Power iteration ------------------------------------------------------------

SpectralEstimate power_iteration(const LocalGraph& g, const PowerOptions& options, int max_iterations) {
  if (!(options.tolerance > 0.0)) throw DomainError("lambda_max: tolerance must be positive");
  SpectralEstimate est;
  est.method = SpectralMethod::power_on_A_squared;
  est.tolerance = options.tolerance;
  if (g.empty()) return est;

  const std::size_t m = g.size();
  std::vector<double> x(m), t(m), y(m);
  rng::Stream stream(options.seed);
  for (auto& xi : x) xi = 1.0 + 1e-3 * (2.0 * stream.uniform() - 1.0);
  const double norm0 = std::sqrt(kernels::dot(x, x));
  for (auto& xi : x) xi /= norm0;

  const double change_tol =
      std::max(options.tolerance * options.tolerance, 1e-15);
  double theta_prev = 0.0;
  double theta = 0.0;
  double best_theta = 0.0;
  est.converged = false;
  for (int it = 1; it <= max_iterations; ++it) {
    kernels::adjacency_apply(g, x, t);
    kernels::adjacency_apply(g, t, y);
    theta = kernels::dot(x, y);
    // ||y||^2 - theta^2 cancels near convergence; form the difference.
    for (std::size_t i = 0; i < m; ++i) t[i] = y[i] - theta * x[i];
    const double residual = theta > 0.0 ? std::sqrt(kernels::dot(t, t)) / theta : 0.0;
    est.iterations = it;
    best_theta = std::max(best_theta, theta);
    est.residual = residual;
    if (theta <= 0.0) break;
    if (it > 1 && std::fabs(theta - theta_prev) <= change_tol * theta &&
        residual <= options.tolerance) {
      est.converged = true;
      break;
    }
    theta_prev = theta;
    const double ny = std::sqrt(kernels::dot(y, y));
    for (std::size_t i = 0; i < m; ++i) x[i] = y[i] / ny;
  }
  // Every Rayleigh quotient is a lower bound on lambda^2; keep the largest.
  est.value = std::sqrt(best_theta);
  return est;
}

namespace {

bool is_star(const LocalGraph& g) {
  if (g.edge_count() + 1 != g.size()) return false;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.degree(i) + 1 == g.size()) return true;
  return false;
}

// Edge sets of the connected components, largest first, ties by smallest vertex.
std::vector<std::vector<Edge>> split_components(const LocalGraph& g) {
  std::vector<std::uint32_t> label(g.size(), std::numeric_limits<std::uint32_t>::max());
  std::vector<std::vector<Edge>> parts;
  std::vector<std::uint32_t> queue;
  for (std::size_t root = 0; root < g.size(); ++root) {
    if (label[root] != std::numeric_limits<std::uint32_t>::max()) continue;
    const auto id = static_cast<std::uint32_t>(parts.size());
    parts.emplace_back();
    queue.assign(1, static_cast<std::uint32_t>(root));
    label[root] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto i = queue[head];
      for (const auto j : g.neighbors(i)) {
        if (j > i) parts[id].push_back({g.vertex(i), g.vertex(j)});
        if (label[j] == std::numeric_limits<std::uint32_t>::max()) {
          label[j] = id;
          queue.push_back(j);
        }
      }
    }
  }
  std::stable_sort(parts.begin(), parts.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return parts;
}

}  // namespace

SpectralEstimate lambda_max(const LocalGraph& g, const PowerOptions& options, int max_iterations) {
  if (!(options.tolerance > 0.0)) throw DomainError("lambda_max: tolerance must be positive");
  SpectralEstimate best;
  best.tolerance = options.tolerance;
  if (g.empty()) return best;
  // Iterating on each component alone avoids near-ties between components,
  // which stall an iteration on the whole matrix. A component with m edges
  // has lambda <= sqrt(m), so the remaining ones can be skipped once below.
  int iterations = 0;
  bool converged = true;
  bool first = true;
  for (const auto& edges : split_components(g)) {
    const double cap = std::sqrt(static_cast<double>(edges.size()));
    if (!first && cap <= best.value) break;
    const auto part = LocalGraph::from_edges(edges);
    SpectralEstimate est;
    if (is_star(part)) {
      est.method = SpectralMethod::exact_star;
      est.value = cap;
      est.tolerance = options.tolerance;
    } else {
      est = power_iteration(part, options, max_iterations);
    }
    iterations += est.iterations;
    converged = converged && est.converged;
    if (first || est.value > best.value) best = est;
    first = false;
  }
  best.iterations = iterations;
  best.converged = converged;
  return best;
}

SpectralEstimate lambda_max(const SubgraphSample& sample, const PowerOptions& options) {
  const int iters = options.max_iterations > 0 ? options.max_iterations
                                               : default_max_iterations(sample.dimension().value());
  return lambda_max(sample.graph(), options, iters);
}

// Dense reference ------------------------------------------------------------

std::vector<double> symmetric_eigenvalues(std::span<const double> matrix, std::size_t dim) {
  if (matrix.size() != dim * dim) throw DomainError("symmetric_eigenvalues: size mismatch");
  if (dim > kDenseCap) throw CapacityError("dense eigensolver capped at 4096 x 4096");
  if (dim == 0) return {};
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
      matrix.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(mat), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

namespace {

std::vector<double> dense_adjacency(const LocalGraph& g) {
  const std::size_t m = g.size();
  std::vector<double> a(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (const auto j : g.neighbors(i)) a[i * m + j] = 1.0;
  return a;
}

std::vector<double> pad_zeros(std::vector<double> eig, std::uint64_t total) {
  // Isolated vertices add exact zero eigenvalues.
  std::vector<double> out;
  out.reserve(total);
  std::copy_if(eig.begin(), eig.end(), std::back_inserter(out), [](double v) { return v >= 0.0; });
  out.insert(out.end(), total - eig.size(), 0.0);
  std::copy_if(eig.begin(), eig.end(), std::back_inserter(out), [](double v) { return v < 0.0; });
  return out;
}

}  // namespace

std::vector<double> dense_eigenvalues(const LocalGraph& g) {
  if (g.size() > kDenseCap) throw CapacityError("dense eigensolver capped at 4096 vertices");
  return symmetric_eigenvalues(dense_adjacency(g), g.size());
}

std::vector<double> dense_spectrum(const SubgraphSample& sample) {
  if (sample.dimension().vertex_count() > kDenseCap)
    throw CapacityError("dense_spectrum refuses 2^n > 4096 (n = " +
                        std::to_string(sample.dimension().value()) + ")");
  return pad_zeros(dense_eigenvalues(sample.graph()), sample.dimension().vertex_count());
}

std::vector<double> dense_square_spectrum(const SubgraphSample& sample) {
  const auto& g = sample.graph();
  if (g.size() > kDenseCap) throw CapacityError("dense A^2 spectrum capped at 4096 active vertices");
  const auto m = static_cast<Eigen::Index>(g.size());
  const auto a = dense_adjacency(g);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(a.data(), m, m);
  const Eigen::MatrixXd sq = mat * mat;
  std::vector<double> flat(static_cast<std::size_t>(m * m));
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), m, m) = sq;
  return pad_zeros(symmetric_eigenvalues(flat, g.size()), sample.dimension().vertex_count());
}

bool symmetry_check(std::span<const double> spectrum, double tol) {
  if (!std::is_sorted(spectrum.begin(), spectrum.end(), std::greater<>()))
    throw DomainError("symmetry_check expects a descending spectrum");
  const std::size_t m = spectrum.size();
  for (std::size_t k = 0; k < m; ++k)
    if (std::fabs(spectrum[k] + spectrum[m - 1 - k]) > tol) return false;
  return true;
}

// Components -----------------------------------------------------------------

SpectralEstimate component_lambda_max(std::span<const Edge> edges, const PowerOptions& options) {
  std::vector<Edge> norm(edges.begin(), edges.end());
  for (auto& e : norm)
    if (e.u > e.v) std::swap(e.u, e.v);
  const auto g = LocalGraph::from_edges(norm);

  // Connectivity by BFS over local indices.
  if (!g.empty()) {
    std::vector<char> seen(g.size(), 0);
    std::vector<std::uint32_t> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (const auto j : g.neighbors(queue[head]))
        if (!seen[j]) {
          seen[j] = 1;
          queue.push_back(j);
        }
    if (queue.size() != g.size()) throw DomainError("component_lambda_max: edge set is not connected");
  }

  SpectralEstimate est;
  est.tolerance = options.tolerance;
  if (g.empty()) {
    est.method = SpectralMethod::exact_star;
    return est;
  }
  std::size_t max_deg = 0;
  for (std::size_t i = 0; i < g.size(); ++i) max_deg = std::max(max_deg, g.degree(i));
  const bool tree = g.edge_count() + 1 == g.size();
  if (tree && max_deg + 1 == g.size()) {
    est.method = SpectralMethod::exact_star;
    est.value = std::sqrt(static_cast<double>(g.edge_count()));
    return est;
  }
  Vertex top = 0;
  for (const auto v : g.vertices()) top |= v;
  const int n = std::max(1, static_cast<int>(std::bit_width(top)));
  const int iters = options.max_iterations > 0 ? options.max_iterations : default_max_iterations(n);
  return power_iteration(g, options, iters);
}

// Decomposition bound --------------------------------------------------------

namespace {

int piece_of(Part a, Part b) {
  if (a == b) return static_cast<int>(a);
  const auto lo = std::min(a, b), hi = std::max(a, b);
  if (lo == Part::v1 && hi == Part::v2) return 3;
  if (lo == Part::v1 && hi == Part::v3) return 4;
  return 5;
}

SpectralEstimate solve_piece(const LocalGraph& g, bool dense, const PowerOptions& options, int n) {
  if (!dense) {
    const int iters = options.max_iterations > 0 ? options.max_iterations : default_max_iterations(n);
    return lambda_max(g, options, iters);
  }
  SpectralEstimate est;
  est.method = SpectralMethod::dense_reference;
  est.tolerance = options.tolerance;
  if (!g.empty()) est.value = std::max(0.0, dense_eigenvalues(g).front());
  return est;
}

}  // namespace

DecompositionBound decomposition_bound(const SubgraphSample& sample,
                                       const VertexPartition& partition,
                                       const PowerOptions& options) {
  const Dimension n = sample.dimension();
  if (partition.assignment.size() != n.vertex_count())
    throw DomainError("partition does not cover the vertex set of Q^" + std::to_string(n.value()));
  for (const auto part : partition.assignment)
    if (part != Part::v1 && part != Part::v2 && part != Part::v3)
      throw DomainError("partition holds an invalid part label");

  std::array<std::vector<Edge>, 6> pieces;
  for (const auto& e : sample.graph().edges())
    pieces[piece_of(partition.assignment[e.u], partition.assignment[e.v])].push_back(e);

  const bool dense = n.vertex_count() <= kDenseCap;
  DecompositionBound out;
  out.whole = solve_piece(sample.graph(), dense, options, n.value());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    out.part_edges[i] = pieces[i].size();
    out.parts[i] = solve_piece(LocalGraph::from_edges(pieces[i]), dense, options, n.value());
    out.sum += out.parts[i].value;
  }
  out.holds = out.whole.value <= out.sum + 6.0 * options.tolerance;
  return out;
}

// Two-step counts ------------------------------------------------------------

std::uint64_t two_step_count(const SubgraphSample& sample, Vertex x,
                             const std::function<bool(Vertex)>& target) {
  if (!sample.dimension().contains(x)) throw DomainError("two_step_count: vertex out of range");
  const auto& g = sample.graph();
  const auto xi = g.local_index(x);
  if (!xi) return 0;
  std::uint64_t count = 0;
  for (const auto u : g.neighbors(*xi))
    for (const auto y : g.neighbors(u))
      if (y != *xi && target(g.vertex(y))) ++count;
  return count;
}

std::uint64_t row_sum_A2(const SubgraphSample& sample, Vertex x) {
  if (!sample.dimension().contains(x)) throw DomainError("row_sum_A2: vertex out of range");
  const auto& g = sample.graph();
  const auto xi = g.local_index(x);
  if (!xi) return 0;
  std::uint64_t sum = 0;
  for (const auto u : g.neighbors(*xi)) sum += g.degree(u);
  return sum;
}

// Eigenvalue-count certificate -----------------------------------------------

std::size_t eigenvalue_count_at_least(std::span<const double> spectrum, double lambda) {
  return static_cast<std::size_t>(std::count_if(
      spectrum.begin(), spectrum.end(), [lambda](double v) { return v >= lambda - 1e-9; }));
}

namespace {

// Vertices within distance 2 of x in the sample, excluding x.
std::vector<Vertex> ball2(const SubgraphSample& sample, Vertex x) {
  std::vector<Vertex> out;
  const auto& g = sample.graph();
  const auto xi = g.local_index(x);
  if (!xi) return out;
  for (const auto u : g.neighbors(*xi)) {
    out.push_back(g.vertex(u));
    for (const auto w : g.neighbors(u))
      if (w != *xi) out.push_back(g.vertex(w));
  }
  return out;
}

}  // namespace

EigenvalueCountCertificate lemma9_certificate(const SubgraphSample& sample, std::vector<Vertex> family) {
  const std::unordered_set<Vertex> members(family.begin(), family.end());
  if (members.size() != family.size()) throw InvalidCertificate("certificate family repeats a vertex");
  for (const auto x : family) {
    if (!sample.dimension().contains(x)) throw InvalidCertificate("certificate vertex out of range");
    for (const auto y : ball2(sample, x))
      if (members.contains(y))
        throw InvalidCertificate("certificate vertices " + std::to_string(x) + " and " +
                                 std::to_string(y) + " are within distance 2");
  }
  EigenvalueCountCertificate cert;
  cert.certified_count = family.size();
  if (!family.empty()) {
    std::size_t floor = std::numeric_limits<std::size_t>::max();
    for (const auto x : family) floor = std::min(floor, sample.degree(x));
    cert.rayleigh_floor = static_cast<double>(floor);
  }
  cert.family = std::move(family);
  return cert;
}

std::vector<Vertex> thin_certificate_family(const SubgraphSample& sample,
                                            std::span<const Vertex> candidates) {
  std::vector<Vertex> chosen;
  std::unordered_set<Vertex> blocked;
  for (const auto x : candidates) {
    if (blocked.contains(x)) continue;
    chosen.push_back(x);
    blocked.insert(x);
    for (const auto y : ball2(sample, x)) blocked.insert(y);
  }
  return chosen;
}

bool certificate_holds(const EigenvalueCountCertificate& cert, std::span<const double> square_spectrum) {
  return cert.certified_count <= eigenvalue_count_at_least(square_spectrum, cert.rayleigh_floor);
}

}  // namespace cubespec
