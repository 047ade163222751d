#include <doctest.h>

#include <chrono>

#include "support.hpp"
#include "tnpath/evaluator.hpp"
#include "tnpath/expression_io.hpp"
#include "tnpath/generators.hpp"
#include "tnpath/optimize.hpp"

using namespace tnpath;

namespace {

void check_same(const OptimizeReport& a, const OptimizeReport& b) {
  CHECK(a.best.path == b.best.path);
  CHECK(a.best.total_flops == b.best.total_flops);
  CHECK(a.best.max_intermediate_size == b.best.max_intermediate_size);
  CHECK(a.best.cost_fn_used == b.best.cost_fn_used);
  CHECK(a.selected_cost_fn == b.selected_cost_fn);
  CHECK(a.paths_evaluated == b.paths_evaluated);
  REQUIRE(a.per_cost_fn.size() == b.per_cost_fn.size());
  for (const auto& [name, stats] : a.per_cost_fn) {
    CHECK(stats.path == b.per_cost_fn.at(name).path);
    CHECK(stats.total_flops == b.per_cost_fn.at(name).total_flops);
  }
}

}  // namespace

TEST_CASE("auto mode picks skewed-max on the example") {
  const auto net = testing::example_network();
  OptimizeConfig cfg;
  const auto report = optimize(net, cfg);
  CHECK(report.selected_cost_fn == "skewed-max");
  CHECK(report.best.total_flops == 36.0);
  CHECK(report.per_cost_fn.at("standard").total_flops == 44.0);
  CHECK(report.per_cost_fn.at("balanced-min").total_flops == 44.0);
  CHECK(report.per_cost_fn.at("skewed-max").total_flops == 36.0);
  CHECK(report.paths_evaluated == 128);
  CHECK(report.sweep_complete);
}

TEST_CASE("a single cost function with one path") {
  const auto net = testing::example_network();
  OptimizeConfig cfg;
  cfg.cost_fns = {make_cost_fn("balanced-min")};
  cfg.budget = PathCountBudget{1};
  const auto report = optimize(net, cfg);
  CHECK(report.best.path == ContractionPath{{{2, 3}, {0, 1}, {0, 1}}});
  CHECK(report.best.total_flops == 44.0);
  CHECK(report.paths_evaluated == 1);
}

TEST_CASE("single-tensor network") {
  auto net = parse_einsum_string("ij->ji", {{"i", 2}, {"j", 3}});
  const auto report = optimize(net, OptimizeConfig{});
  CHECK(report.best.path.empty());
  CHECK(report.best.total_flops == 0.0);
}

TEST_CASE("objective max-size") {
  const auto net = testing::example_network();
  OptimizeConfig cfg;
  cfg.objective = Objective::max_size;
  const auto report = optimize(net, cfg);
  // Skewed path peaks at 3, balanced at 4.
  CHECK(report.best.max_intermediate_size == 3.0);
  for (const auto& [name, stats] : report.per_cost_fn) {
    CHECK(report.best.max_intermediate_size <= stats.max_intermediate_size);
  }
}

TEST_CASE("path budget accounting") {
  const auto net = gen_grid_network(4, 4, 2, 0);
  const auto n_fns = static_cast<std::int64_t>(default_cost_fn_set().size());
  for (std::int64_t paths : {std::int64_t{1}, std::int64_t{5}, n_fns, n_fns + 1, std::int64_t{128}}) {
    OptimizeConfig cfg;
    cfg.budget = PathCountBudget{paths};
    const auto report = optimize(net, cfg);
    CHECK(report.paths_evaluated == std::max(paths, n_fns));
    CHECK(report.per_cost_fn.size() == static_cast<std::size_t>(n_fns));
  }
}

TEST_CASE("serial reference and OpenMP driver agree") {
  Rng rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    const auto net = trial % 3 == 0 ? gen_regular_network(40 + 10 * trial, 3, 2, rng.next())
                                     : testing::random_einsum(rng, 3 + rng.below(12), 2, 5);
    OptimizeConfig cfg;
    cfg.seed = rng.next();
    cfg.budget = PathCountBudget{static_cast<std::int64_t>(20 + rng.below(60))};
    cfg.objective = trial % 2 ? Objective::flops : Objective::max_size;
    const auto serial = optimize_serial(net, cfg);
    for (int threads : {1, 2, 4}) {
      cfg.threads = threads;
      check_same(serial, optimize(net, cfg));
    }
  }
}

TEST_CASE("report invariants") {
  Rng rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = testing::random_einsum(rng, 2 + rng.below(10), 2, 6);
    OptimizeConfig cfg;
    cfg.seed = trial;
    cfg.budget = PathCountBudget{40};
    const auto report = optimize(net, cfg);
    const auto check = evaluate(net, report.best.path);
    CHECK(check.total_flops == report.best.total_flops);
    for (const auto& [name, stats] : report.per_cost_fn) {
      CHECK(report.best.total_flops <= stats.total_flops);
    }
    CHECK(report.per_cost_fn.at(report.selected_cost_fn).total_flops == report.best.total_flops);
  }
}

TEST_CASE("more paths never hurt under the same seed") {
  const auto net = gen_random_network(30, 0.15, 2, 5);
  double previous = std::numeric_limits<double>::infinity();
  for (std::int64_t paths : {1, 18, 32, 64, 128, 256}) {
    OptimizeConfig cfg;
    cfg.seed = 3;
    cfg.budget = PathCountBudget{paths};
    const double flops = optimize(net, cfg).best.total_flops;
    CHECK(flops <= previous);
    previous = flops;
  }
}

TEST_CASE("wall-clock budget") {
  const auto net = gen_regular_network(400, 3, 2, 9);
  OptimizeConfig cfg;
  cfg.budget = WallClockBudget{60};
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = optimize(net, cfg);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  CHECK(report.paths_evaluated >= 1);
  CHECK_NOTHROW(evaluate(net, report.best.path));
  // One trial on this instance takes well under the slack.
  CHECK(ms < 60 + 250);
}

TEST_CASE("config validation") {
  const auto net = testing::example_network();
  OptimizeConfig cfg;
  cfg.budget = PathCountBudget{0};
  CHECK_THROWS_AS(optimize(net, cfg), ConfigError);
  cfg.budget = WallClockBudget{0};
  CHECK_THROWS_AS(optimize(net, cfg), ConfigError);
  cfg = {};
  cfg.threads = 0;
  CHECK_THROWS_AS(optimize(net, cfg), ConfigError);
  cfg = {};
  cfg.sampling.tau = -1;
  CHECK_THROWS_AS(optimize_serial(net, cfg), ConfigError);
  CHECK(parse_objective("size") == Objective::max_size);
  CHECK_THROWS_AS(parse_objective("time"), ConfigError);
}
