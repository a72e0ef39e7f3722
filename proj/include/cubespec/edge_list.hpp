#pragma once

// Text edge-list format:
//
//   cube-subgraph v1 n=<n> p=<decimal> seed=<u64>
//   <u> <v>
//   ...
//
// one line per edge with u < v, in ascending edge-id order.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "cubespec/sampler.hpp"

namespace cubespec {

class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

void write_edge_list(std::ostream& out, const SubgraphSample& sample);
SubgraphSample read_edge_list(std::istream& in);

void save_edge_list(const std::filesystem::path& path, const SubgraphSample& sample);
SubgraphSample load_edge_list(const std::filesystem::path& path);

}  // namespace cubespec
