#pragma once

// Test-only helpers. The brute-force enumerator replays paths through the
// string-level model functions only, so it stays independent of the id-based
// kernels used by the evaluator, greedy and DP oracle.

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tnpath/network.hpp"
#include "tnpath/optimize.hpp"
#include "tnpath/rng.hpp"

namespace tnpath::testing {

inline TensorNetwork example_network() {
  return TensorNetwork({{"i"}, {"i", "j"}, {"j", "k"}, {"k", "m"}}, {"m"},
                       {{"i", 3}, {"j", 2}, {"k", 3}, {"m", 2}});
}

struct BruteForceResult {
  double best_flops = std::numeric_limits<double>::infinity();
  double best_size = std::numeric_limits<double>::infinity();
  ContractionPath best_flops_path;
  std::size_t orderings = 0;
};

struct ReplayTotals {
  double flops = 0.0;
  double max_size = 0.0;
};

/// Replays a path with the string-level model functions.
inline ReplayTotals replay_by_labels(const TensorNetwork& net, const ContractionPath& path) {
  std::vector<IndexList> live = net.inputs();
  const std::set<Label> output(net.output().begin(), net.output().end());
  ReplayTotals totals;
  for (const auto& [p1, p2] : path.steps) {
    std::map<Label, int> counts;
    for (std::size_t k = 0; k < live.size(); ++k) {
      if (k == p1 || k == p2) continue;
      for (const auto& l : live[k]) ++counts[l];
    }
    IndexList out = pair_output_indices(live[p1], live[p2], counts, output);
    totals.flops += pairwise_flops(live[p1], live[p2], out, net.sizes());
    totals.max_size = std::max(totals.max_size, term_size(out, net.sizes()));
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(std::max(p1, p2)));
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(std::min(p1, p2)));
    live.push_back(std::move(out));
  }
  return totals;
}

/// Enumerates every linear path (pairs with first < second). n <= 7.
inline BruteForceResult brute_force(const TensorNetwork& net) {
  BruteForceResult result;
  ContractionPath path;
  std::function<void(std::size_t)> recurse = [&](std::size_t len) {
    if (len == 1) {
      ++result.orderings;
      auto totals = replay_by_labels(net, path);
      if (totals.flops < result.best_flops) {
        result.best_flops = totals.flops;
        result.best_flops_path = path;
      }
      result.best_size = std::min(result.best_size, totals.max_size);
      return;
    }
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = i + 1; j < len; ++j) {
        path.steps.push_back({i, j});
        recurse(len - 1);
        path.steps.pop_back();
      }
    }
  };
  recurse(net.num_inputs());
  return result;
}

/// Random einsum over up to `num_labels` labels with hyperedges, extents in
/// [min_extent, max_extent], and a random output subset.
inline TensorNetwork random_einsum(Rng& rng, std::size_t n, std::int64_t min_extent,
                                   std::int64_t max_extent, std::size_t num_labels = 0) {
  if (num_labels == 0) num_labels = n + 1 + rng.below(n + 1);
  std::vector<Label> labels;
  for (std::size_t l = 0; l < num_labels; ++l) labels.push_back("x" + std::to_string(l));
  std::vector<IndexList> inputs(n);
  SizeDict sizes;
  for (const auto& l : labels) {
    // Each label lands on 1..3 distinct terms, so some are hyperedges.
    const std::size_t holders = 1 + rng.below(std::min<std::size_t>(3, n));
    std::vector<std::size_t> terms(n);
    for (std::size_t t = 0; t < n; ++t) terms[t] = t;
    for (std::size_t k = 0; k < holders; ++k) {
      std::swap(terms[k], terms[k + rng.below(n - k)]);
      inputs[terms[k]].push_back(l);
    }
    sizes[l] = min_extent + static_cast<std::int64_t>(rng.below(max_extent - min_extent + 1));
  }
  IndexList output;
  for (const auto& l : labels) {
    if (rng.uniform() < 0.25) output.push_back(l);
  }
  return TensorNetwork(std::move(inputs), std::move(output), std::move(sizes));
}

inline double joint_space(const TensorNetwork& net) {
  double space = 1.0;
  for (LabelId l = 0; l < net.num_labels(); ++l) {
    if (net.refcount(l) > 0) space *= net.extent(l);
  }
  return space;
}

}  // namespace tnpath::testing
