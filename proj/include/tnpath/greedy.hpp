#pragma once

#include <cstdint>

#include "tnpath/cost_functions.hpp"
#include "tnpath/network.hpp"

namespace tnpath {

struct SamplingParams {
  int top_b = 4;
  double tau = 1.0;
};

/// Deterministic mode breaks cost ties by smaller size12, then by smaller
/// position pair. Sampled mode draws each phase-2 contraction from the
/// `top_b` cheapest candidates with Boltzmann weights
/// exp(-(cost - cost_min) / (tau * max(1, |cost_min|))).
struct GreedyMode {
  bool sampled = false;
  std::uint64_t seed = 0;
  SamplingParams sampling;

  static GreedyMode deterministic() { return {}; }
  static GreedyMode sample(std::uint64_t seed, SamplingParams params = {}) {
    return {true, seed, params};
  }
};

/// Three-phase greedy path:
///   1. Hadamard products of terms with identical index sets.
///   2. Lowest-cost contraction among pairs sharing an index, until no two
///      live terms share one.
///   3. Outer products, always pairing the two smallest terms.
ContractionPath greedy_path(const TensorNetwork& network, const CostFnSpec& cost_fn,
                            const GreedyMode& mode = GreedyMode::deterministic());

}  // namespace tnpath
