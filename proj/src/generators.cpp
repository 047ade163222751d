#include "tnpath/generators.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "tnpath/rng.hpp"

namespace tnpath {
namespace {

using Edge = std::pair<int, int>;

TensorNetwork from_edges(int n, const std::vector<Edge>& edges, std::int64_t extent) {
  std::vector<IndexList> inputs(static_cast<std::size_t>(n));
  SizeDict sizes;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Label label = "e" + std::to_string(k);
    inputs[edges[k].first].push_back(label);
    inputs[edges[k].second].push_back(label);
    sizes[label] = extent;
  }
  return TensorNetwork(std::move(inputs), {}, std::move(sizes));
}

void check_extent(std::int64_t extent) {
  if (extent < 2) throw Error("generated networks need extent >= 2");
}

}  // namespace

TensorNetwork gen_grid_network(int rows, int cols, std::int64_t extent, std::uint64_t /*seed*/) {
  check_extent(extent);
  if (rows < 1 || cols < 1) throw Error("grid needs rows >= 1 and cols >= 1");
  std::vector<Edge> edges;
  auto node = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(node(r, c), node(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(node(r, c), node(r + 1, c));
    }
  }
  return from_edges(rows * cols, edges, extent);
}

TensorNetwork gen_regular_network(int n, int degree, std::int64_t extent, std::uint64_t seed) {
  check_extent(extent);
  if (n < 1 || degree < 0) throw Error("regular graph needs n >= 1 and degree >= 0");
  if ((static_cast<std::int64_t>(n) * degree) % 2 != 0) {
    throw Error("regular graph needs n * degree even");
  }
  if (degree >= n && degree > 0) throw Error("regular graph needs degree < n");

  Rng rng(seed);
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * degree);
  for (int v = 0; v < n; ++v) {
    for (int d = 0; d < degree; ++d) stubs.push_back(v);
  }

  constexpr int kMaxRestarts = 10000;
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    // Pair stubs at random, rejecting loops and parallel edges locally; a dead
    // end restarts the whole attempt.
    std::vector<int> pool = stubs;
    std::set<Edge> seen;
    std::vector<Edge> edges;
    bool ok = true;
    while (!pool.empty() && ok) {
      ok = false;
      for (int tries = 0; tries < 100; ++tries) {
        const auto i = static_cast<std::size_t>(rng.below(pool.size()));
        const auto j = static_cast<std::size_t>(rng.below(pool.size()));
        if (i == j) continue;
        Edge e = std::minmax(pool[i], pool[j]);
        if (e.first == e.second || seen.count(e)) continue;
        seen.insert(e);
        edges.push_back(e);
        // Remove the larger index first so the smaller stays valid.
        for (auto k : {std::max(i, j), std::min(i, j)}) {
          pool[k] = pool.back();
          pool.pop_back();
        }
        ok = true;
        break;
      }
    }
    if (ok) {
      std::sort(edges.begin(), edges.end());
      return from_edges(n, edges, extent);
    }
  }
  throw Error("failed to sample a simple regular graph");
}

TensorNetwork gen_random_network(int n, double edge_prob, std::int64_t extent,
                                 std::uint64_t seed) {
  check_extent(extent);
  if (n < 1) throw Error("random graph needs n >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw Error("edge probability must be in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.uniform() < edge_prob) edges.emplace_back(a, b);
    }
  }
  return from_edges(n, edges, extent);
}

}  // namespace tnpath
