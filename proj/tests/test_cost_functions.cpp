#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "support.hpp"
#include "tnpath/cost_functions.hpp"

using namespace tnpath;

namespace {

PairCandidate cand(double s1, double s2, double s12, int removed = 0) {
  PairCandidate c;
  c.size1 = s1;
  c.size2 = s2;
  c.size12 = s12;
  c.removed = removed;
  return c;
}

}  // namespace

TEST_CASE("pair_cost examples") {
  CHECK(pair_cost(make_cost_fn("balanced-min"), cand(6, 4, 8)) == 4.0);
  CHECK(pair_cost(make_cost_fn("skewed-max"), cand(6, 4, 8)) == 2.0);
  CHECK(pair_cost(make_cost_fn("standard"), cand(6, 6, 4)) == -8.0);
  CHECK(pair_cost(make_cost_fn("weighted", {{"alpha", 2}, {"beta", 0.5}}), cand(6, 4, 8)) ==
        8.0 - 12.0 - 2.0);
  CHECK(pair_cost(make_cost_fn("log-ratio"), cand(4, 4, 16)) == doctest::Approx(1.0));
  CHECK(pair_cost(make_cost_fn("removal-bonus"), cand(6, 6, 4, 3)) == -11.0);
  CHECK(pair_cost(make_cost_fn("removal-bonus", {{"gamma", 0}}), cand(6, 6, 4, 3)) == -8.0);
}

TEST_CASE("saturated sizes never produce NaN") {
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& spec : default_cost_fn_set()) {
    const double c = pair_cost(spec, cand(inf, inf, inf, 1));
    CHECK_FALSE(std::isnan(c));
  }
  CHECK(pair_cost(make_cost_fn("standard"), cand(inf, 2, inf)) == inf);
  CHECK(pair_cost(make_cost_fn("weighted", {{"alpha", 0}, {"beta", 0}}), cand(inf, inf, 4)) == 4.0);
}

TEST_CASE("registry errors") {
  CHECK_THROWS_WITH_AS(make_cost_fn("nope"), doctest::Contains("balanced-min"), Error);
  CHECK_THROWS_AS(make_cost_fn("standard", {{"alpha", 1}}), Error);
  CHECK_THROWS_AS(make_cost_fn("weighted", {{"alpha", -1}}), Error);
  CHECK(registered_cost_fns().size() == 6);
}

TEST_CASE("parse_cost_fn") {
  CHECK(parse_cost_fn("skewed-max") == make_cost_fn("skewed-max"));
  auto w = parse_cost_fn("weighted(alpha=0.5, beta=2)");
  CHECK(w.params.at("alpha") == 0.5);
  CHECK(w.params.at("beta") == 2.0);
  CHECK(w.id() == "weighted(alpha=0.5,beta=2)");
  CHECK(parse_cost_fn(w.id()) == w);
  CHECK(parse_cost_fn("weighted").params.at("alpha") == 1.0);
  CHECK_THROWS_AS(parse_cost_fn("weighted(alpha=x)"), Error);
  CHECK_THROWS_AS(parse_cost_fn("weighted(alpha=1"), Error);
}

TEST_CASE("default set") {
  const auto set = default_cost_fn_set();
  REQUIRE(set.size() == 18);
  CHECK(set[0].name == "standard");
  CHECK(set[1].name == "balanced-min");
  CHECK(set[2].name == "skewed-max");
  CHECK(set[16].name == "log-ratio");
  CHECK(set[17].name == "removal-bonus");
  std::set<std::string> ids;
  for (const auto& s : set) ids.insert(s.id());
  CHECK(ids.size() == set.size());
  CHECK(default_cost_fn_set() == set);
}

TEST_CASE("uniform positive scaling preserves candidate ranking") {
  Rng rng(17);
  const std::vector<std::string> scale_free = {"standard", "balanced-min", "skewed-max"};
  std::vector<CostFnSpec> specs;
  for (const auto& name : scale_free) specs.push_back(make_cost_fn(name));
  specs.push_back(make_cost_fn("weighted", {{"alpha", 2}, {"beta", 0.5}}));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PairCandidate> cands;
    for (int k = 0; k < 6; ++k) {
      cands.push_back(cand(1 + rng.below(64), 1 + rng.below(64), 1 + rng.below(256)));
    }
    const double lambda = std::ldexp(1.0, static_cast<int>(rng.below(10)));
    for (const auto& spec : specs) {
      std::vector<std::pair<double, int>> base, scaled;
      for (int k = 0; k < 6; ++k) {
        auto c = cands[k];
        base.emplace_back(pair_cost(spec, c), k);
        c.size1 *= lambda;
        c.size2 *= lambda;
        c.size12 *= lambda;
        const double sc = pair_cost(spec, c);
        CHECK(sc == doctest::Approx(lambda * base.back().first));
        scaled.emplace_back(sc, k);
      }
      std::sort(base.begin(), base.end());
      std::sort(scaled.begin(), scaled.end());
      for (int k = 0; k < 6; ++k) CHECK(base[k].second == scaled[k].second);
    }
  }
}
