#include "tnpath/detail/kernels.hpp"

namespace tnpath::detail {

PairResult contract_indices(const TensorNetwork& net, const TermIndices& a, const TermIndices& b,
                            const std::vector<int>& live) {
  PairResult r;
  r.out.reserve(a.size() + b.size());
  auto visit = [&](LabelId id, int uses) {
    double e = net.extent(id);
    r.union_size *= e;
    if (net.is_output(id) || live[id] - uses > 0) {
      r.out.push_back(id);
      r.size12 *= e;
    } else {
      ++r.removed;
    }
  };
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      visit(a[i++], 1);
    } else if (i == a.size() || b[j] < a[i]) {
      visit(b[j++], 1);
    } else {
      visit(a[i], 2);
      ++i;
      ++j;
    }
  }
  return r;
}

PairResult reduce_indices(const TensorNetwork& net, const TermIndices& a) {
  PairResult r;
  for (LabelId id : a) {
    double e = net.extent(id);
    r.union_size *= e;
    if (net.is_output(id)) {
      r.out.push_back(id);
      r.size12 *= e;
    } else {
      ++r.removed;
    }
  }
  return r;
}

LiveList::LiveList(std::size_t capacity) : tree_(capacity + 1, 0), present_(capacity, 0) {
  while (top_bit_ * 2 <= capacity) top_bit_ *= 2;
}

void LiveList::add(std::size_t id, int delta) {
  for (std::size_t k = id + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
}

void LiveList::insert(std::size_t id) {
  if (present_[id]) return;
  present_[id] = 1;
  ++count_;
  add(id, 1);
}

void LiveList::erase(std::size_t id) {
  if (!present_[id]) return;
  present_[id] = 0;
  --count_;
  add(id, -1);
}

std::size_t LiveList::position_of(std::size_t id) const {
  int sum = 0;
  for (std::size_t k = id; k > 0; k -= k & (~k + 1)) sum += tree_[k];
  return static_cast<std::size_t>(sum);
}

std::size_t LiveList::id_at(std::size_t pos) const {
  // Largest prefix whose count is <= pos; the next slot is the answer.
  std::size_t idx = 0;
  auto remaining = static_cast<int>(pos);
  for (std::size_t bit = top_bit_; bit > 0; bit >>= 1) {
    std::size_t next = idx + bit;
    if (next < tree_.size() && tree_[next] <= remaining) {
      idx = next;
      remaining -= tree_[next];
    }
  }
  return idx;
}

}  // namespace tnpath::detail
