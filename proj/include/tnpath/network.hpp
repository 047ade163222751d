#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnpath {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Label = std::string;
using IndexList = std::vector<Label>;
using SizeDict = std::map<Label, std::int64_t>;

/// Dense label id. Ids follow the lexicographic order of the labels, so a
/// sorted id list is also in canonical label order.
using LabelId = std::uint32_t;
using TermIndices = std::vector<LabelId>;

/// True if the token is usable as an index label in both text formats.
bool is_valid_label(const Label& label);

/// An einsum problem instance: input index lists, output index list and the
/// extent of every index. Validated on construction, immutable afterwards.
class TensorNetwork {
 public:
  TensorNetwork(std::vector<IndexList> inputs, IndexList output, SizeDict sizes);

  const std::vector<IndexList>& inputs() const { return inputs_; }
  const IndexList& output() const { return output_; }
  const SizeDict& sizes() const { return sizes_; }
  std::size_t num_inputs() const { return inputs_.size(); }

  // Interned view used by the path kernels.
  std::size_t num_labels() const { return names_.size(); }
  const Label& label_name(LabelId id) const { return names_[id]; }
  LabelId label_id(const Label& label) const;
  double extent(LabelId id) const { return extents_[id]; }
  const std::vector<TermIndices>& input_ids() const { return input_ids_; }
  const TermIndices& output_ids() const { return output_ids_; }
  bool is_output(LabelId id) const { return output_mask_[id] != 0; }
  /// Number of input terms that contain the label.
  int refcount(LabelId id) const { return refcount_[id]; }

  IndexList names_of(const TermIndices& ids) const;
  double size_of(const TermIndices& ids) const;

 private:
  std::vector<IndexList> inputs_;
  IndexList output_;
  SizeDict sizes_;

  std::vector<Label> names_;
  std::vector<double> extents_;
  std::vector<TermIndices> input_ids_;
  TermIndices output_ids_;
  std::vector<char> output_mask_;
  std::vector<int> refcount_;
};

struct ContractionStep {
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const ContractionStep&, const ContractionStep&) = default;
  friend auto operator<=>(const ContractionStep&, const ContractionStep&) = default;
};

/// Pairs of positions into a shrinking term list. After each step the two
/// operands are removed and their result is appended at the end.
struct ContractionPath {
  std::vector<ContractionStep> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }

  friend bool operator==(const ContractionPath&, const ContractionPath&) = default;
  friend auto operator<=>(const ContractionPath&, const ContractionPath&) = default;
};

struct PairCandidate {
  std::size_t pos1 = 0;
  std::size_t pos2 = 0;
  IndexList indices_out;
  double size1 = 1.0;
  double size2 = 1.0;
  double size12 = 1.0;
  int removed = 0;
  double cost = 0.0;
};

struct PathStats {
  double total_flops = 0.0;
  double max_intermediate_size = 0.0;
  ContractionPath path;
  std::string cost_fn_used;
  int tree_depth = 0;
};

/// Product of the extents of the given indices; saturates to +inf.
double term_size(const IndexList& indices, const SizeDict& sizes);

/// Indices of the pairwise result of t1 and t2. A label survives if it is in
/// the output or still referenced by some other live term (live_counts counts
/// other live terms only). Result is in ascending lexicographic order.
IndexList pair_output_indices(const IndexList& t1, const IndexList& t2,
                              const std::map<Label, int>& live_counts,
                              const std::set<Label>& output);

/// Flop count of one pairwise contraction: extent product of the union of
/// both operands, doubled when at least one index is summed away.
double pairwise_flops(const IndexList& t1, const IndexList& t2, const IndexList& out,
                      const SizeDict& sizes);

}  // namespace tnpath
