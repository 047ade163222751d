#pragma once

#include <map>
#include <string>
#include <vector>

#include "tnpath/network.hpp"

namespace tnpath {

/// Named, parameterized scoring rule for a pairwise contraction candidate.
/// Lower cost is better; costs may be negative.
///
/// Registered rules:
///   standard       size12 - (size1 + size2)
///   balanced-min   size12 - min(size1, size2)
///   skewed-max     size12 - max(size1, size2)
///   weighted       size12 - alpha*max(size1, size2) - beta*min(size1, size2)
///   log-ratio      log2(size12) - log2(size1 + size2)
///   removal-bonus  size12 - (size1 + size2) - gamma*removed
struct CostFnSpec {
  std::string name;
  std::map<std::string, double> params;

  /// Display name, e.g. `weighted(alpha=0.5,beta=2)`. Unique within the
  /// default set.
  std::string id() const;

  friend bool operator==(const CostFnSpec&, const CostFnSpec&) = default;
};

std::vector<std::string> registered_cost_fns();

/// Builds a spec, filling default parameters and validating ranges.
CostFnSpec make_cost_fn(const std::string& name, std::map<std::string, double> params = {});

/// Parses `name` or `name(key=value,...)`.
CostFnSpec parse_cost_fn(const std::string& text);

/// NaN results (inf - inf) are reported as +inf.
double pair_cost(const CostFnSpec& spec, const PairCandidate& c);

/// Fixed ordered set used by "auto": standard, balanced-min, skewed-max, the
/// weighted grid over alpha, beta in {0, 0.5, 1, 2} minus the three points
/// that coincide with the first three, log-ratio, removal-bonus.
std::vector<CostFnSpec> default_cost_fn_set();

namespace detail {

/// Pre-resolved form of a spec for the inner greedy loop.
class CostEvaluator {
 public:
  explicit CostEvaluator(const CostFnSpec& spec);
  double operator()(double size1, double size2, double size12, int removed) const;

 private:
  enum class Kind { standard, balanced_min, skewed_max, weighted, log_ratio, removal_bonus };
  Kind kind_;
  double alpha_ = 1.0;
  double beta_ = 1.0;
  double gamma_ = 1.0;
};

}  // namespace detail

}  // namespace tnpath
