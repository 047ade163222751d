#pragma once

#include <cstdint>

#include "tnpath/network.hpp"

namespace tnpath {

// Graph-shaped instances: one tensor per vertex, one index per edge (label
// "e<k>"), every index of the same extent, scalar output. All generators are
// pure functions of their arguments.

TensorNetwork gen_grid_network(int rows, int cols, std::int64_t extent, std::uint64_t seed);

/// Uniform-ish random simple `degree`-regular graph via the pairing model
/// with restarts. Requires n * degree even and degree < n.
TensorNetwork gen_regular_network(int n, int degree, std::int64_t extent, std::uint64_t seed);

/// Erdos-Renyi G(n, p).
TensorNetwork gen_random_network(int n, double edge_prob, std::int64_t extent,
                                 std::uint64_t seed);

}  // namespace tnpath
