#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tnpath/network.hpp"
#include "tnpath/optimize.hpp"

namespace tnpath {

/// Exact optimum over all binary contraction orders by dynamic programming
/// over subsets of input terms. Among optimal paths the lexicographically
/// smallest one is returned. Refuses networks with more than `limit` inputs.
PathStats optimal_path(const TensorNetwork& network, Objective objective, std::size_t limit = 10);

/// Row-major dense tensor; `labels` gives the axis order.
struct DenseTensor {
  IndexList labels;
  std::vector<double> data;
};

/// One tensor per input term, entries uniform on [-1, 1].
std::vector<DenseTensor> random_tensor_data(const TensorNetwork& network, std::uint64_t seed);

/// Definitional einsum: sums the product of all inputs over every joint index
/// assignment. Refuses joint spaces larger than `max_space`.
DenseTensor naive_contract(const TensorNetwork& network, const std::vector<DenseTensor>& data,
                           double max_space = 1e7);

/// Executes the path pairwise on real data; result axes follow network.output().
DenseTensor contract_along_path(const TensorNetwork& network,
                                const std::vector<DenseTensor>& data,
                                const ContractionPath& path);

/// max |a - b| / max(1, max |b|) over all entries. Throws on shape mismatch.
double relative_error(const DenseTensor& a, const DenseTensor& b);

}  // namespace tnpath
