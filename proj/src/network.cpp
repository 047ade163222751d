#include "tnpath/network.hpp"

#include <algorithm>

namespace tnpath {

bool is_valid_label(const Label& label) {
  if (label.empty()) return false;
  for (char c : label) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      return false;
    }
  }
  return label.find("->") == Label::npos;
}

TensorNetwork::TensorNetwork(std::vector<IndexList> inputs, IndexList output, SizeDict sizes)
    : inputs_(std::move(inputs)), output_(std::move(output)), sizes_(std::move(sizes)) {
  if (inputs_.empty()) throw Error("network has no input terms");

  names_.reserve(sizes_.size());
  extents_.reserve(sizes_.size());
  for (const auto& [label, extent] : sizes_) {
    if (!is_valid_label(label)) throw Error("invalid index label '" + label + "'");
    if (extent < 1) {
      throw Error("extent of index '" + label + "' must be >= 1, got " + std::to_string(extent));
    }
    names_.push_back(label);
    extents_.push_back(static_cast<double>(extent));
  }

  refcount_.assign(names_.size(), 0);
  output_mask_.assign(names_.size(), 0);

  input_ids_.reserve(inputs_.size());
  for (std::size_t t = 0; t < inputs_.size(); ++t) {
    TermIndices ids;
    ids.reserve(inputs_[t].size());
    for (const auto& label : inputs_[t]) {
      if (!is_valid_label(label)) throw Error("invalid index label '" + label + "'");
      auto it = sizes_.find(label);
      if (it == sizes_.end()) throw Error("no extent given for index '" + label + "'");
      ids.push_back(static_cast<LabelId>(std::distance(sizes_.begin(), it)));
    }
    std::sort(ids.begin(), ids.end());
    auto dup = std::adjacent_find(ids.begin(), ids.end());
    if (dup != ids.end()) {
      throw Error("index '" + names_[*dup] + "' repeated within input term " +
                  std::to_string(t));
    }
    for (LabelId id : ids) ++refcount_[id];
    input_ids_.push_back(std::move(ids));
  }

  for (const auto& label : output_) {
    auto it = sizes_.find(label);
    if (it == sizes_.end() || refcount_[std::distance(sizes_.begin(), it)] == 0) {
      throw Error("output index '" + label + "' does not occur in any input term");
    }
    auto id = static_cast<LabelId>(std::distance(sizes_.begin(), it));
    if (output_mask_[id]) throw Error("index '" + label + "' repeated in output");
    output_mask_[id] = 1;
    output_ids_.push_back(id);
  }
  std::sort(output_ids_.begin(), output_ids_.end());
}

LabelId TensorNetwork::label_id(const Label& label) const {
  auto it = sizes_.find(label);
  if (it == sizes_.end()) throw Error("unknown index '" + label + "'");
  return static_cast<LabelId>(std::distance(sizes_.begin(), it));
}

IndexList TensorNetwork::names_of(const TermIndices& ids) const {
  IndexList out;
  out.reserve(ids.size());
  for (LabelId id : ids) out.push_back(names_[id]);
  return out;
}

double TensorNetwork::size_of(const TermIndices& ids) const {
  double size = 1.0;
  for (LabelId id : ids) size *= extents_[id];
  return size;
}

double term_size(const IndexList& indices, const SizeDict& sizes) {
  double size = 1.0;
  for (const auto& label : indices) {
    auto it = sizes.find(label);
    if (it == sizes.end()) throw Error("no extent given for index '" + label + "'");
    size *= static_cast<double>(it->second);
  }
  return size;
}

IndexList pair_output_indices(const IndexList& t1, const IndexList& t2,
                              const std::map<Label, int>& live_counts,
                              const std::set<Label>& output) {
  std::set<Label> all(t1.begin(), t1.end());
  all.insert(t2.begin(), t2.end());
  IndexList out;
  for (const auto& label : all) {
    auto it = live_counts.find(label);
    bool live = it != live_counts.end() && it->second > 0;
    if (live || output.count(label) != 0) out.push_back(label);
  }
  return out;
}

double pairwise_flops(const IndexList& t1, const IndexList& t2, const IndexList& out,
                      const SizeDict& sizes) {
  std::set<Label> all(t1.begin(), t1.end());
  all.insert(t2.begin(), t2.end());
  double flops = term_size(IndexList(all.begin(), all.end()), sizes);
  std::set<Label> kept(out.begin(), out.end());
  bool summed = std::any_of(all.begin(), all.end(),
                            [&](const Label& l) { return kept.count(l) == 0; });
  return summed ? 2.0 * flops : flops;
}

}  // namespace tnpath
