#pragma once

#include <cstddef>
#include <vector>

#include "tnpath/network.hpp"

namespace tnpath::detail {

struct PairResult {
  TermIndices out;
  double size12 = 1.0;
  double union_size = 1.0;
  int removed = 0;

  double flops() const { return removed > 0 ? 2.0 * union_size : union_size; }
};

/// Pairwise result of terms a and b. `live` holds, per label, the number of
/// live terms containing it, a and b included.
PairResult contract_indices(const TensorNetwork& net, const TermIndices& a, const TermIndices& b,
                            const std::vector<int>& live);

/// Result of reducing a single term to the network output.
PairResult reduce_indices(const TensorNetwork& net, const TermIndices& a);

/// Set of live term ids where ids are appended in increasing order, so the
/// list position of an id is the count of live ids below it. Fenwick-backed.
class LiveList {
 public:
  explicit LiveList(std::size_t capacity);

  void insert(std::size_t id);
  void erase(std::size_t id);
  bool contains(std::size_t id) const { return present_[id] != 0; }
  std::size_t size() const { return count_; }

  std::size_t position_of(std::size_t id) const;
  /// Id at list position `pos` (0-based). Requires pos < size().
  std::size_t id_at(std::size_t pos) const;

 private:
  void add(std::size_t id, int delta);

  std::vector<int> tree_;
  std::vector<char> present_;
  std::size_t count_ = 0;
  std::size_t top_bit_ = 1;
};

}  // namespace tnpath::detail
