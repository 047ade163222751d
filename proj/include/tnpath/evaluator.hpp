#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tnpath/network.hpp"

namespace tnpath {

struct TreeNode {
  static constexpr int kNone = -1;

  int left = kNone;
  int right = kNone;
  IndexList indices;

  bool is_leaf() const { return left == kNone; }
};

/// Binary tree induced by a path. Nodes 0..n-1 are the input terms in order;
/// node n+t is the result of step t.
struct ContractionTree {
  std::vector<TreeNode> nodes;
  std::size_t root = 0;

  std::size_t num_leaves() const { return (nodes.size() + 1) / 2; }
  std::size_t num_internal() const { return nodes.size() - num_leaves(); }
  /// Longest leaf-to-root edge count.
  int depth() const;
  /// Edge distance from the root for every leaf, in input order.
  std::vector<int> leaf_depths() const;
};

/// Replays a path and scores it. Throws Error on an invalid path, naming the
/// offending step.
PathStats evaluate(const TensorNetwork& network, const ContractionPath& path);

ContractionTree contraction_tree(const TensorNetwork& network, const ContractionPath& path);

/// One node per line: `id<TAB>children<TAB>indices`. Leaves list `-` as
/// children, indices are space separated.
std::string export_tree(const ContractionTree& tree);

}  // namespace tnpath
