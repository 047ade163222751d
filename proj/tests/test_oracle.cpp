#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tnpath/evaluator.hpp"
#include "tnpath/expression_io.hpp"
#include "tnpath/greedy.hpp"
#include "tnpath/oracle.hpp"

using namespace tnpath;

TEST_CASE("matrix chain optimum") {
  auto net = parse_einsum_string("ab,bc,cd->ad", {{"a", 10}, {"b", 100}, {"c", 5}, {"d", 50}});
  const auto best = optimal_path(net, Objective::flops);
  // (AB)C: 2*10*100*5 + 2*10*5*50.
  CHECK(best.total_flops == 15000.0);
  CHECK(best.path == ContractionPath{{{0, 1}, {0, 1}}});
  CHECK(best.cost_fn_used == "optimal");
  const auto brute = testing::brute_force(net);
  CHECK(brute.best_flops == 15000.0);
  CHECK(brute.orderings == 3);
}

TEST_CASE("example network optimum") {
  const auto net = testing::example_network();
  const auto best = optimal_path(net, Objective::flops);
  const auto brute = testing::brute_force(net);
  CHECK(brute.orderings == 18);
  CHECK(brute.best_flops == 36.0);
  CHECK(best.total_flops == 36.0);
  CHECK(best.path == brute.best_flops_path);
  CHECK(optimal_path(net, Objective::max_size).max_intermediate_size == brute.best_size);
}

TEST_CASE("trivial networks and limits") {
  auto pair = parse_einsum_string("ij,jk->ik", {{"i", 2}, {"j", 3}, {"k", 4}});
  const auto two = optimal_path(pair, Objective::flops);
  CHECK(two.path == ContractionPath{{{0, 1}}});
  CHECK(two.total_flops == 48.0);

  auto single = parse_einsum_string("ij->i", {{"i", 2}, {"j", 3}});
  CHECK(optimal_path(single, Objective::flops).path.empty());

  Rng rng(5);
  const auto big = testing::random_einsum(rng, 11, 2, 3);
  CHECK_THROWS_AS(optimal_path(big, Objective::flops), Error);
  CHECK_NOTHROW(optimal_path(big, Objective::flops, 11));
  // The hard cap applies whatever limit is asked for.
  const auto huge = testing::random_einsum(rng, 21, 2, 2);
  CHECK_THROWS_AS(optimal_path(huge, Objective::flops, 25), Error);
}

TEST_CASE("oracle matches brute force and the evaluator") {
  Rng rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    const auto net = testing::random_einsum(rng, 2 + rng.below(5), 2, 6);
    const auto brute = testing::brute_force(net);
    for (auto objective : {Objective::flops, Objective::max_size}) {
      const auto best = optimal_path(net, objective);
      const auto check = evaluate(net, best.path);
      CHECK(best.total_flops == check.total_flops);
      CHECK(best.max_intermediate_size == check.max_intermediate_size);
      CHECK(best.tree_depth == check.tree_depth);
      if (objective == Objective::flops) {
        CHECK(best.total_flops == doctest::Approx(brute.best_flops).epsilon(1e-12));
        // Ties resolve to the lexicographically smallest path, as in the brute force.
        if (best.total_flops == brute.best_flops) CHECK(best.path == brute.best_flops_path);
      } else {
        CHECK(best.max_intermediate_size == brute.best_size);
      }
    }
  }
}

TEST_CASE("no greedy path beats the optimum") {
  Rng rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    const auto net = testing::random_einsum(rng, 2 + rng.below(7), 2, 6);
    const double optimum = optimal_path(net, Objective::flops).total_flops;
    for (const auto& spec : default_cost_fn_set()) {
      CHECK(evaluate(net, greedy_path(net, spec)).total_flops >= optimum * (1 - 1e-12));
    }
  }
}

TEST_CASE("dense contraction") {
  SUBCASE("matrix product by hand") {
    auto net = parse_einsum_string("ij,jk->ik", {{"i", 2}, {"j", 2}, {"k", 1}});
    std::vector<DenseTensor> data{{{"i", "j"}, {1, 2, 3, 4}}, {{"j", "k"}, {5, 6}}};
    const auto full = naive_contract(net, data);
    CHECK(full.labels == IndexList{"i", "k"});
    CHECK(full.data == std::vector<double>{17, 39});
    CHECK(relative_error(contract_along_path(net, data, ContractionPath{{{0, 1}}}), full) == 0.0);
  }
  SUBCASE("Hadamard and transpose") {
    auto had = parse_einsum_string("ij,ij->ij", {{"i", 2}, {"j", 3}});
    const auto d = random_tensor_data(had, 1);
    const auto h = naive_contract(had, d);
    for (std::size_t k = 0; k < h.data.size(); ++k) CHECK(h.data[k] == d[0].data[k] * d[1].data[k]);

    auto tr = parse_einsum_string("ij->ji", {{"i", 2}, {"j", 3}});
    const auto e = random_tensor_data(tr, 2);
    const auto t = contract_along_path(tr, e, {});
    CHECK(t.labels == IndexList{"j", "i"});
    CHECK(t.data[1 * 2 + 0] == e[0].data[0 * 3 + 1]);
  }
  SUBCASE("example network on both paths") {
    const auto net = testing::example_network();
    const auto data = random_tensor_data(net, 3);
    const auto full = naive_contract(net, data);
    for (const ContractionPath& path :
         {ContractionPath{{{2, 3}, {0, 1}, {0, 1}}}, ContractionPath{{{0, 1}, {0, 2}, {0, 1}}}}) {
      CHECK(relative_error(contract_along_path(net, data, path), full) < 1e-12);
    }
  }
  SUBCASE("random networks, random and optimal paths") {
    Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
      const auto net = testing::random_einsum(rng, 1 + rng.below(6), 1, 4);
      if (testing::joint_space(net) > 1e5) continue;
      const auto data = random_tensor_data(net, trial);
      const auto full = naive_contract(net, data);
      CHECK(relative_error(contract_along_path(net, data, optimal_path(net, Objective::flops).path),
                           full) < 1e-10);
    }
  }
  SUBCASE("guards") {
    auto net = parse_einsum_string("ij,jk->ik", {{"i", 2}, {"j", 2}, {"k", 2}});
    std::vector<DenseTensor> bad{{{"i", "j"}, {1, 2, 3}}, {{"j", "k"}, {1, 2, 3, 4}}};
    CHECK_THROWS_AS(naive_contract(net, bad), Error);
    CHECK_THROWS_AS(naive_contract(net, random_tensor_data(net, 0), 4), Error);
    CHECK_THROWS_AS(relative_error(DenseTensor{{"i"}, {1}}, DenseTensor{{"i"}, {1, 2}}), Error);
  }
}
