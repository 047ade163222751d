#include "tnpath/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "tnpath/evaluator.hpp"
#include "tnpath/rng.hpp"

namespace tnpath {
namespace {

using Mask = std::uint32_t;

// Index sets of every subset of input terms, as label bitsets.
class SubsetIndex {
 public:
  explicit SubsetIndex(const TensorNetwork& net) : net_(net) {
    const std::size_t n = net.num_inputs();
    words_ = (net.num_labels() + 63) / 64;
    std::vector<Mask> holders(net.num_labels(), 0);
    for (std::size_t t = 0; t < n; ++t) {
      for (LabelId l : net.input_ids()[t]) holders[l] |= Mask{1} << t;
    }
    const Mask full = (Mask{1} << n) - 1;
    bits_.assign((std::size_t{1} << n) * words_, 0);
    for (Mask s = 1; s <= full; ++s) {
      for (LabelId l = 0; l < holders.size(); ++l) {
        const Mask h = holders[l];
        // A single input keeps every label until it takes part in a step.
        const bool leaf = std::has_single_bit(s);
        if ((h & s) && (leaf || net.is_output(l) || (h & ~s & full))) {
          bits_[s * words_ + l / 64] |= std::uint64_t{1} << (l % 64);
        }
      }
    }
  }

  struct Step {
    double flops;
    double size;
  };

  /// Cost of merging the contracted subsets a and b (disjoint).
  Step merge(Mask a, Mask b) const {
    const Mask ab = a | b;
    double union_size = 1.0;
    double out_size = 1.0;
    bool summed = false;
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t u = bits_[a * words_ + w] | bits_[b * words_ + w];
      const std::uint64_t o = bits_[ab * words_ + w];
      summed = summed || (u & ~o) != 0;
      for (std::size_t bit = 0; bit < 64; ++bit) {
        const std::uint64_t m = std::uint64_t{1} << bit;
        if (u & m) union_size *= net_.extent(static_cast<LabelId>(w * 64 + bit));
        if (o & m) out_size *= net_.extent(static_cast<LabelId>(w * 64 + bit));
      }
    }
    return {summed ? 2.0 * union_size : union_size, out_size};
  }

 private:
  const TensorNetwork& net_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

double combine(double acc, double step, Objective objective) {
  return objective == Objective::flops ? acc + step : std::max(acc, step);
}

double step_value(const SubsetIndex::Step& s, Objective objective) {
  return objective == Objective::flops ? s.flops : s.size;
}

// Optimal cost of merging the given already-contracted groups into one.
double best_completion(const SubsetIndex& index, const std::vector<Mask>& groups,
                       Objective objective) {
  const std::size_t m = groups.size();
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<double> best(full + 1, std::numeric_limits<double>::infinity());
  std::vector<Mask> leaves(full + 1, 0);
  for (std::size_t u = 1; u <= full; ++u) {
    const std::size_t low = u & (~u + 1);
    leaves[u] = leaves[u ^ low] | groups[static_cast<std::size_t>(std::countr_zero(low))];
    if (u == low) {
      best[u] = 0.0;
      continue;
    }
    // Enumerate splits whose first half holds the lowest group.
    const std::size_t rest = u ^ low;
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t left = sub | low;
      if (left != u) {
        const std::size_t right = u ^ left;
        const double here = step_value(index.merge(leaves[left], leaves[right]), objective);
        const double value = combine(combine(best[left], best[right], objective), here, objective);
        best[u] = std::min(best[u], value);
      }
      if (sub == 0) break;
    }
  }
  return best[full];
}

bool within(double value, double optimum) {
  return value <= optimum + 1e-12 * std::max(1.0, std::abs(optimum));
}

template <typename Fn>
void for_each_assignment(const std::vector<std::int64_t>& extents, Fn&& fn) {
  std::vector<std::int64_t> idx(extents.size(), 0);
  for (std::int64_t e : extents) {
    if (e == 0) return;
  }
  while (true) {
    fn(idx);
    std::size_t k = idx.size();
    while (k > 0) {
      --k;
      if (++idx[k] < extents[k]) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (idx.empty()) return;
  }
}

// Row-major strides of `labels` expressed over the axis order `axes`.
std::vector<std::int64_t> strides_over(const IndexList& labels, const IndexList& axes,
                                       const SizeDict& sizes) {
  std::vector<std::int64_t> out(axes.size(), 0);
  std::int64_t stride = 1;
  for (std::size_t k = labels.size(); k-- > 0;) {
    auto pos = std::find(axes.begin(), axes.end(), labels[k]) - axes.begin();
    out[static_cast<std::size_t>(pos)] = stride;
    stride *= sizes.at(labels[k]);
  }
  return out;
}

std::size_t element_count(const IndexList& labels, const SizeDict& sizes) {
  std::size_t count = 1;
  for (const auto& l : labels) count *= static_cast<std::size_t>(sizes.at(l));
  return count;
}

void check_data(const TensorNetwork& net, const std::vector<DenseTensor>& data) {
  if (data.size() != net.num_inputs()) throw Error("expected one tensor per input term");
  for (std::size_t t = 0; t < data.size(); ++t) {
    if (data[t].labels != net.inputs()[t] ||
        data[t].data.size() != element_count(data[t].labels, net.sizes())) {
      throw Error("tensor " + std::to_string(t) + " does not match its input term");
    }
  }
}

// Sum over all labels of the operands not in `out`, of the operand product.
DenseTensor contract_operands(const std::vector<const DenseTensor*>& ops, const IndexList& out,
                              const SizeDict& sizes) {
  std::set<Label> all_set(out.begin(), out.end());
  for (const auto* op : ops) all_set.insert(op->labels.begin(), op->labels.end());
  const IndexList axes(all_set.begin(), all_set.end());
  std::vector<std::int64_t> extents;
  for (const auto& l : axes) extents.push_back(sizes.at(l));
  double space = 1.0;
  for (auto e : extents) space *= static_cast<double>(e);
  if (space > 1e8) throw Error("pairwise contraction space too large for dense execution");

  std::vector<std::vector<std::int64_t>> op_strides;
  for (const auto* op : ops) op_strides.push_back(strides_over(op->labels, axes, sizes));
  const auto out_strides = strides_over(out, axes, sizes);

  DenseTensor result{out, std::vector<double>(element_count(out, sizes), 0.0)};
  for_each_assignment(extents, [&](const std::vector<std::int64_t>& idx) {
    double prod = 1.0;
    for (std::size_t o = 0; o < ops.size(); ++o) {
      std::int64_t off = 0;
      for (std::size_t k = 0; k < idx.size(); ++k) off += idx[k] * op_strides[o][k];
      prod *= ops[o]->data[static_cast<std::size_t>(off)];
    }
    std::int64_t off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) off += idx[k] * out_strides[k];
    result.data[static_cast<std::size_t>(off)] += prod;
  });
  return result;
}

}  // namespace

PathStats optimal_path(const TensorNetwork& network, Objective objective, std::size_t limit) {
  const std::size_t n = network.num_inputs();
  if (n > limit || n > 20) {
    throw Error("optimal_path refuses " + std::to_string(n) + " inputs (limit " +
                std::to_string(limit) + ")");
  }
  if (n == 1) return evaluate(network, {});

  const SubsetIndex index(network);
  std::vector<Mask> groups;
  for (std::size_t t = 0; t < n; ++t) groups.push_back(Mask{1} << t);
  std::vector<int> depth(n, 0);
  const double optimum = best_completion(index, groups, objective);

  PathStats stats;
  double acc = 0.0;
  while (groups.size() > 1) {
    bool found = false;
    for (std::size_t i = 0; i < groups.size() && !found; ++i) {
      for (std::size_t j = i + 1; j < groups.size() && !found; ++j) {
        const auto step = index.merge(groups[i], groups[j]);
        const double next = combine(acc, step_value(step, objective), objective);
        std::vector<Mask> rest;
        std::vector<int> rest_depth;
        for (std::size_t k = 0; k < groups.size(); ++k) {
          if (k != i && k != j) {
            rest.push_back(groups[k]);
            rest_depth.push_back(depth[k]);
          }
        }
        rest.push_back(groups[i] | groups[j]);
        rest_depth.push_back(1 + std::max(depth[i], depth[j]));
        if (!within(combine(next, best_completion(index, rest, objective), objective), optimum)) {
          continue;
        }
        found = true;
        acc = next;
        stats.path.steps.push_back({i, j});
        stats.total_flops += step.flops;
        stats.max_intermediate_size = std::max(stats.max_intermediate_size, step.size);
        groups = std::move(rest);
        depth = std::move(rest_depth);
      }
    }
    if (!found) throw Error("optimal_path failed to reconstruct a path");
  }
  stats.tree_depth = depth.front();
  stats.cost_fn_used = "optimal";
  return stats;
}

std::vector<DenseTensor> random_tensor_data(const TensorNetwork& network, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DenseTensor> data;
  for (const auto& term : network.inputs()) {
    DenseTensor t{term, std::vector<double>(element_count(term, network.sizes()))};
    for (double& v : t.data) v = rng.uniform(-1.0, 1.0);
    data.push_back(std::move(t));
  }
  return data;
}

DenseTensor naive_contract(const TensorNetwork& network, const std::vector<DenseTensor>& data,
                           double max_space) {
  check_data(network, data);
  const auto& sizes = network.sizes();
  IndexList axes;
  std::vector<std::int64_t> extents;
  double space = 1.0;
  for (LabelId l = 0; l < network.num_labels(); ++l) {
    if (network.refcount(l) == 0) continue;
    axes.push_back(network.label_name(l));
    extents.push_back(sizes.at(axes.back()));
    space *= static_cast<double>(extents.back());
  }
  if (space > max_space) {
    throw Error("joint index space " + std::to_string(space) + " exceeds the naive limit");
  }

  std::vector<std::vector<std::int64_t>> in_strides;
  for (const auto& t : data) in_strides.push_back(strides_over(t.labels, axes, sizes));
  const auto out_strides = strides_over(network.output(), axes, sizes);

  DenseTensor out{network.output(),
                  std::vector<double>(element_count(network.output(), sizes), 0.0)};
  std::vector<std::int64_t> idx(axes.size(), 0);
  for (double step = 0; step < space; ++step) {
    double prod = 1.0;
    for (std::size_t t = 0; t < data.size(); ++t) {
      std::int64_t off = 0;
      for (std::size_t k = 0; k < idx.size(); ++k) off += idx[k] * in_strides[t][k];
      prod *= data[t].data[static_cast<std::size_t>(off)];
    }
    std::int64_t off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) off += idx[k] * out_strides[k];
    out.data[static_cast<std::size_t>(off)] += prod;

    for (std::size_t k = idx.size(); k-- > 0;) {
      if (++idx[k] < extents[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

DenseTensor contract_along_path(const TensorNetwork& network,
                                const std::vector<DenseTensor>& data,
                                const ContractionPath& path) {
  check_data(network, data);
  // Validates the path and its step count.
  evaluate(network, path);
  const auto& sizes = network.sizes();
  const std::set<Label> output(network.output().begin(), network.output().end());

  std::vector<DenseTensor> live = data;
  for (const auto& [p1, p2] : path.steps) {
    std::map<Label, int> counts;
    for (std::size_t k = 0; k < live.size(); ++k) {
      if (k == p1 || k == p2) continue;
      for (const auto& l : live[k].labels) ++counts[l];
    }
    const IndexList out = pair_output_indices(live[p1].labels, live[p2].labels, counts, output);
    DenseTensor merged = contract_operands({&live[p1], &live[p2]}, out, sizes);
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(std::max(p1, p2)));
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(std::min(p1, p2)));
    live.push_back(std::move(merged));
  }
  return contract_operands({&live.front()}, network.output(), sizes);
}

double relative_error(const DenseTensor& a, const DenseTensor& b) {
  if (a.labels != b.labels || a.data.size() != b.data.size()) {
    throw Error("relative_error: tensors differ in shape");
  }
  double scale = 1.0;
  for (double v : b.data) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    worst = std::max(worst, std::abs(a.data[k] - b.data[k]));
  }
  return worst / scale;
}

}  // namespace tnpath
