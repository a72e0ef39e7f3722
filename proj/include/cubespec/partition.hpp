#pragma once

#include <cstdint>
#include <vector>

#include "cubespec/hypercube.hpp"

namespace cubespec {

enum class Part : std::uint8_t { v1 = 0, v2 = 1, v3 = 2 };

/// Assignment of every vertex of Q^n to one of V1, V2, V3.
struct VertexPartition {
  std::vector<Part> assignment;  // size 2^n

  Part operator[](Vertex v) const { return assignment.at(v); }
};

}  // namespace cubespec
