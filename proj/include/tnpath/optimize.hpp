#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tnpath/cost_functions.hpp"
#include "tnpath/greedy.hpp"
#include "tnpath/network.hpp"

namespace tnpath {

enum class Objective { flops, max_size };

Objective parse_objective(const std::string& text);
std::string to_string(Objective objective);

/// Objective value of a scored path.
double objective_value(const PathStats& stats, Objective objective);

/// Strict improvement under the objective; ties are not improvements.
bool better(const PathStats& candidate, const PathStats& incumbent, Objective objective);

struct PathCountBudget {
  std::int64_t paths = 128;
};

struct WallClockBudget {
  std::int64_t ms = 1000;
};

using Budget = std::variant<PathCountBudget, WallClockBudget>;

/// Raised for a configuration that cannot run, as opposed to bad input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct OptimizeConfig {
  Objective objective = Objective::flops;
  Budget budget = PathCountBudget{};
  std::uint64_t seed = 0;
  /// Empty means the default set.
  std::vector<CostFnSpec> cost_fns;
  SamplingParams sampling;
  /// Stage-2 worker threads. Results do not depend on it.
  int threads = 1;
};

struct OptimizeReport {
  PathStats best;
  /// Keyed by CostFnSpec::id().
  std::map<std::string, PathStats> per_cost_fn;
  std::int64_t paths_evaluated = 0;
  double elapsed_ms = 0.0;
  std::string selected_cost_fn;
  /// False when the wall-clock budget expired before every cost function ran.
  bool sweep_complete = true;
};

void validate(const OptimizeConfig& config);

/// Sweep every configured cost function once deterministically, select the
/// best under the objective (earliest wins ties), then spend the remaining
/// budget on sampled paths with the selected function. Trial t is seeded
/// with trial_seed(config.seed, t). Runs stage 2 on config.threads OpenMP
/// threads; with a path-count budget the report matches optimize_serial.
OptimizeReport optimize(const TensorNetwork& network, const OptimizeConfig& config);

/// Single-threaded reference for optimize().
OptimizeReport optimize_serial(const TensorNetwork& network, const OptimizeConfig& config);

}  // namespace tnpath
