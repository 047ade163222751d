#include "tnpath/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <optional>

#include <omp.h>

#include "tnpath/evaluator.hpp"
#include "tnpath/rng.hpp"

namespace tnpath {

Objective parse_objective(const std::string& text) {
  if (text == "flops") return Objective::flops;
  if (text == "size" || text == "max-size") return Objective::max_size;
  throw ConfigError("unknown objective '" + text + "' (expected flops or size)");
}

std::string to_string(Objective objective) {
  return objective == Objective::flops ? "flops" : "size";
}

double objective_value(const PathStats& stats, Objective objective) {
  return objective == Objective::flops ? stats.total_flops : stats.max_intermediate_size;
}

bool better(const PathStats& candidate, const PathStats& incumbent, Objective objective) {
  return objective_value(candidate, objective) < objective_value(incumbent, objective);
}

void validate(const OptimizeConfig& config) {
  if (const auto* count = std::get_if<PathCountBudget>(&config.budget)) {
    if (count->paths < 1) throw ConfigError("path budget must be >= 1");
  } else if (std::get<WallClockBudget>(config.budget).ms < 1) {
    throw ConfigError("time budget must be >= 1 ms");
  }
  if (config.sampling.top_b < 1) throw ConfigError("top_b must be >= 1");
  if (!(config.sampling.tau > 0.0)) throw ConfigError("tau must be > 0");
  if (config.threads < 1) throw ConfigError("thread count must be >= 1");
}

namespace {

using Clock = std::chrono::steady_clock;

class Run {
 public:
  Run(const TensorNetwork& net, const OptimizeConfig& config)
      : net_(net),
        config_(config),
        fns_(config.cost_fns.empty() ? default_cost_fn_set() : config.cost_fns),
        start_(Clock::now()) {
    validate(config);
    if (const auto* wall = std::get_if<WallClockBudget>(&config.budget)) {
      deadline_ = start_ + std::chrono::milliseconds(wall->ms);
    }
  }

  const std::vector<CostFnSpec>& fns() const { return fns_; }
  bool timed() const { return deadline_.has_value(); }
  bool expired() const { return deadline_ && Clock::now() >= *deadline_; }

  /// Number of stage-2 trials under a path budget.
  std::int64_t trial_quota(std::int64_t swept) const {
    const auto& count = std::get<PathCountBudget>(config_.budget);
    return std::max<std::int64_t>(0, count.paths - swept);
  }

  PathStats sweep(std::size_t i) const {
    auto stats = evaluate(net_, greedy_path(net_, fns_[i]));
    stats.cost_fn_used = fns_[i].id();
    return stats;
  }

  PathStats trial(std::size_t fn, std::int64_t t) const {
    auto mode = GreedyMode::sample(trial_seed(config_.seed, static_cast<std::uint64_t>(t)),
                                   config_.sampling);
    auto stats = evaluate(net_, greedy_path(net_, fns_[fn], mode));
    stats.cost_fn_used = fns_[fn].id();
    return stats;
  }

  void record_sweep(OptimizeReport& report, std::size_t i, PathStats stats) const {
    ++report.paths_evaluated;
    if (report.selected_cost_fn.empty() || better(stats, report.best, config_.objective)) {
      report.best = stats;
      report.selected_cost_fn = stats.cost_fn_used;
      selected_ = i;
    }
    report.per_cost_fn.emplace(stats.cost_fn_used, std::move(stats));
  }

  void record_trial_best(OptimizeReport& report, const PathStats& stats) const {
    auto& slot = report.per_cost_fn.at(report.selected_cost_fn);
    if (better(stats, slot, config_.objective)) slot = stats;
    if (better(stats, report.best, config_.objective)) report.best = stats;
  }

  std::size_t selected() const { return selected_; }

  void finish(OptimizeReport& report) const {
    report.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  const TensorNetwork& net_;
  const OptimizeConfig& config_;
  std::vector<CostFnSpec> fns_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  mutable std::size_t selected_ = 0;
};

}  // namespace

OptimizeReport optimize_serial(const TensorNetwork& network, const OptimizeConfig& config) {
  Run run(network, config);
  OptimizeReport report;

  for (std::size_t i = 0; i < run.fns().size(); ++i) {
    if (i > 0 && run.expired()) {
      report.sweep_complete = false;
      break;
    }
    run.record_sweep(report, i, run.sweep(i));
  }

  const std::int64_t swept = report.paths_evaluated;
  for (std::int64_t t = 0;; ++t) {
    if (run.timed() ? run.expired() : t >= run.trial_quota(swept)) break;
    run.record_trial_best(report, run.trial(run.selected(), t));
    ++report.paths_evaluated;
  }

  run.finish(report);
  return report;
}

OptimizeReport optimize(const TensorNetwork& network, const OptimizeConfig& config) {
  Run run(network, config);
  OptimizeReport report;
  const int threads = config.threads;

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto guarded = [&](auto&& fn) {
    try {
      fn();
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const auto num_fns = static_cast<std::int64_t>(run.fns().size());
  std::vector<std::optional<PathStats>> swept_stats(run.fns().size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < num_fns; ++i) {
    if (i > 0 && run.expired()) continue;
    guarded([&] { swept_stats[i] = run.sweep(static_cast<std::size_t>(i)); });
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t i = 0; i < swept_stats.size(); ++i) {
    if (swept_stats[i]) {
      run.record_sweep(report, i, std::move(*swept_stats[i]));
    } else {
      report.sweep_complete = false;
    }
  }

  const std::int64_t quota = run.timed() ? -1 : run.trial_quota(report.paths_evaluated);
  std::atomic<std::int64_t> next_trial{0};
  std::atomic<std::int64_t> completed{0};
  std::optional<PathStats> best_trial;
  std::int64_t best_trial_index = -1;
  std::mutex merge_mutex;

#pragma omp parallel num_threads(threads)
  {
    std::optional<PathStats> local;
    std::int64_t local_index = -1;
    guarded([&] {
      while (true) {
        if (run.timed() && run.expired()) break;
        const std::int64_t t = next_trial.fetch_add(1);
        if (!run.timed() && t >= quota) break;
        auto stats = run.trial(run.selected(), t);
        completed.fetch_add(1);
        // Each thread sees increasing t, so strict improvement keeps the
        // earliest trial among equals.
        if (!local || better(stats, *local, config.objective)) {
          local = std::move(stats);
          local_index = t;
        }
      }
    });
    if (local) {
      std::lock_guard lock(merge_mutex);
      const bool take = !best_trial || better(*local, *best_trial, config.objective) ||
                        (!better(*best_trial, *local, config.objective) &&
                         local_index < best_trial_index);
      if (take) {
        best_trial = std::move(local);
        best_trial_index = local_index;
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  if (best_trial) run.record_trial_best(report, *best_trial);
  report.paths_evaluated += completed.load();
  run.finish(report);
  return report;
}

}  // namespace tnpath
