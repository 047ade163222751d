#include "tnpath/evaluator.hpp"

#include <algorithm>
#include <sstream>

#include "tnpath/detail/kernels.hpp"

namespace tnpath {
namespace {

struct Replay {
  PathStats stats;
  ContractionTree tree;
};

Replay replay(const TensorNetwork& net, const ContractionPath& path) {
  const std::size_t n = net.num_inputs();
  Replay out;
  out.stats.path = path;

  auto& nodes = out.tree.nodes;
  nodes.reserve(2 * n);
  for (const auto& input : net.inputs()) nodes.push_back(TreeNode{TreeNode::kNone, TreeNode::kNone, input});

  if (n == 1) {
    if (!path.empty()) {
      throw Error("step 0: single-term network takes an empty path, got " +
                  std::to_string(path.size()) + " steps");
    }
    auto r = detail::reduce_indices(net, net.input_ids()[0]);
    out.stats.total_flops = r.removed > 0 ? r.union_size : 0.0;
    out.stats.max_intermediate_size = r.size12;
    return out;
  }

  std::vector<TermIndices> terms(net.input_ids());
  terms.reserve(2 * n);
  std::vector<int> live(net.num_labels());
  for (LabelId id = 0; id < live.size(); ++id) live[id] = net.refcount(id);
  std::vector<int> depth(2 * n, 0);

  detail::LiveList list(2 * n);
  for (std::size_t id = 0; id < n; ++id) list.insert(id);

  for (std::size_t t = 0; t < path.size(); ++t) {
    const auto [p1, p2] = path.steps[t];
    const std::size_t len = list.size();
    if (p1 >= len || p2 >= len) {
      throw Error("step " + std::to_string(t) + ": position " + std::to_string(std::max(p1, p2)) +
                  " out of range for " + std::to_string(len) + " terms");
    }
    if (p1 == p2) {
      throw Error("step " + std::to_string(t) + ": contracts position " + std::to_string(p1) +
                  " with itself");
    }
    const std::size_t a = list.id_at(p1);
    const std::size_t b = list.id_at(p2);

    auto r = detail::contract_indices(net, terms[a], terms[b], live);
    out.stats.total_flops += r.flops();
    out.stats.max_intermediate_size = std::max(out.stats.max_intermediate_size, r.size12);

    for (LabelId id : terms[a]) --live[id];
    for (LabelId id : terms[b]) --live[id];
    for (LabelId id : r.out) ++live[id];

    const std::size_t c = terms.size();
    list.erase(a);
    list.erase(b);
    list.insert(c);
    depth[c] = 1 + std::max(depth[a], depth[b]);
    nodes.push_back(TreeNode{static_cast<int>(a), static_cast<int>(b), net.names_of(r.out)});
    terms.push_back(std::move(r.out));
  }

  if (list.size() != 1) {
    throw Error("path leaves " + std::to_string(list.size()) + " terms uncontracted");
  }
  const std::size_t root = terms.size() - 1;
  if (terms[root] != net.output_ids()) {
    throw Error("final term index set differs from the network output");
  }
  out.tree.root = root;
  out.stats.tree_depth = depth[root];
  return out;
}

}  // namespace

int ContractionTree::depth() const {
  auto d = leaf_depths();
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

std::vector<int> ContractionTree::leaf_depths() const {
  std::vector<int> leaf(num_leaves(), 0);
  if (nodes.empty()) return leaf;
  std::vector<std::pair<std::size_t, int>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    const auto& tn = nodes[node];
    if (tn.is_leaf()) {
      leaf[node] = d;
    } else {
      stack.emplace_back(static_cast<std::size_t>(tn.left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(tn.right), d + 1);
    }
  }
  return leaf;
}

PathStats evaluate(const TensorNetwork& network, const ContractionPath& path) {
  return replay(network, path).stats;
}

ContractionTree contraction_tree(const TensorNetwork& network, const ContractionPath& path) {
  return replay(network, path).tree;
}

std::string export_tree(const ContractionTree& tree) {
  std::ostringstream os;
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const auto& node = tree.nodes[id];
    os << id << '\t';
    if (node.is_leaf()) {
      os << '-';
    } else {
      os << node.left << ',' << node.right;
    }
    os << '\t';
    for (std::size_t k = 0; k < node.indices.size(); ++k) os << (k ? " " : "") << node.indices[k];
    os << '\n';
  }
  return os.str();
}

}  // namespace tnpath
