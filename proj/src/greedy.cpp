#include "tnpath/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <tuple>

#include "tnpath/detail/kernels.hpp"
#include "tnpath/rng.hpp"

namespace tnpath {
namespace {

using TermId = std::uint32_t;

struct Candidate {
  double cost;
  double size12;
  TermId a;  // a < b
  TermId b;

  auto key() const { return std::tie(cost, size12, a, b); }
};

struct CheaperLast {
  bool operator()(const Candidate& x, const Candidate& y) const { return x.key() > y.key(); }
};

using CandidateHeap = std::priority_queue<Candidate, std::vector<Candidate>, CheaperLast>;

// Terms are addressed by SSA id: inputs are 0..n-1 and the result of step t
// is n+t. Live ids in increasing order are exactly the shrinking term list,
// so id order and position order agree.
class GreedyState {
 public:
  GreedyState(const TensorNetwork& net, const CostFnSpec& cost_fn)
      : net_(net), cost_(cost_fn), label_terms_(net.num_labels()) {
    const std::size_t n = net.num_inputs();
    terms_.reserve(2 * n);
    sizes_.reserve(2 * n);
    alive_.reserve(2 * n);
    mark_.assign(2 * n, std::numeric_limits<TermId>::max());
    shared_.resize(2 * n);
    dangling_size_.reserve(2 * n);
    dangling_count_.reserve(2 * n);
    live_.resize(net.num_labels());
    for (LabelId id = 0; id < live_.size(); ++id) live_[id] = net.refcount(id);
    for (std::size_t t = 0; t < n; ++t) {
      terms_.push_back(net.input_ids()[t]);
      sizes_.push_back(net.size_of(terms_.back()));
      alive_.push_back(1);
      double dangling = 1.0;
      int count = 0;
      for (LabelId l : terms_.back()) {
        label_terms_[l].push_back(static_cast<TermId>(t));
        if (live_[l] == 1 && !net.is_output(l)) {
          dangling *= net.extent(l);
          ++count;
        }
      }
      dangling_size_.push_back(dangling);
      dangling_count_.push_back(count);
    }
  }

  std::size_t num_terms() const { return terms_.size(); }
  bool alive(TermId id) const { return alive_[id] != 0; }
  double size(TermId id) const { return sizes_[id]; }
  const TermIndices& indices(TermId id) const { return terms_[id]; }
  const std::vector<std::pair<TermId, TermId>>& steps() const { return steps_; }

  TermId contract(TermId a, TermId b) {
    if (a > b) std::swap(a, b);
    auto r = detail::contract_indices(net_, terms_[a], terms_[b], live_);
    for (LabelId l : terms_[a]) --live_[l];
    for (LabelId l : terms_[b]) --live_[l];
    const auto c = static_cast<TermId>(terms_.size());
    for (LabelId l : r.out) {
      ++live_[l];
      label_terms_[l].push_back(c);
    }
    alive_[a] = 0;
    alive_[b] = 0;
    terms_.push_back(std::move(r.out));
    sizes_.push_back(r.size12);
    alive_.push_back(1);
    dangling_size_.push_back(1.0);
    dangling_count_.push_back(0);
    steps_.emplace_back(a, b);
    return c;
  }

  /// Candidates between `id` and every live term sharing an index with it.
  /// Only shared labels are visited: with r = rank(id) and k the number of
  /// holders per label this is O(r * k).
  template <typename Fn>
  void for_each_candidate(TermId id, Fn&& fn) {
    touched_.clear();
    for (LabelId l : terms_[id]) {
      auto& holders = label_terms_[l];
      const double e = net_.extent(l);
      const bool summed = live_[l] == 2 && !net_.is_output(l);
      std::size_t keep = 0;
      for (TermId other : holders) {
        if (!alive_[other]) continue;
        holders[keep++] = other;
        if (other == id) continue;
        if (mark_[other] != id) {
          mark_[other] = id;
          shared_[other] = {1.0, 1.0, 0};
          touched_.push_back(other);
        }
        auto& acc = shared_[other];
        if (summed) {
          acc.summed *= e;
          ++acc.removed;
        } else {
          acc.kept *= e;
        }
      }
      holders.resize(keep);
    }
    for (TermId other : touched_) {
      const auto& acc = shared_[other];
      // Each factor is a sub-product of one operand, so neither overflows
      // unless the operand size itself is saturated.
      const double own = sizes_[id] / (dangling_size_[id] * acc.summed * acc.kept);
      const double theirs = sizes_[other] / (dangling_size_[other] * acc.summed);
      const double size12 = own * theirs;
      const int removed = acc.removed + dangling_count_[id] + dangling_count_[other];
      const double cost = cost_(sizes_[id], sizes_[other], size12, removed);
      fn(Candidate{cost, size12, std::min(id, other), std::max(id, other)});
    }
  }

 private:
  const TensorNetwork& net_;
  detail::CostEvaluator cost_;
  std::vector<TermIndices> terms_;
  std::vector<double> sizes_;
  std::vector<char> alive_;
  std::vector<int> live_;
  std::vector<std::vector<TermId>> label_terms_;
  std::vector<TermId> mark_;
  // Labels held by a single input term and absent from the output: summed
  // by whichever contraction first touches the term.
  std::vector<double> dangling_size_;
  std::vector<int> dangling_count_;
  struct SharedAcc {
    double summed;
    double kept;
    int removed;
  };
  std::vector<SharedAcc> shared_;
  std::vector<TermId> touched_;
  std::vector<std::pair<TermId, TermId>> steps_;
};

void hadamard_phase(GreedyState& state, std::size_t n) {
  std::map<TermIndices, std::vector<TermId>> by_indices;
  std::vector<const std::vector<TermId>*> groups;
  for (TermId t = 0; t < n; ++t) {
    auto [it, inserted] = by_indices.try_emplace(state.indices(t));
    it->second.push_back(t);
    if (inserted) groups.push_back(&it->second);
  }
  for (const auto* group : groups) {
    if (group->size() < 2) continue;
    TermId acc = state.contract((*group)[0], (*group)[1]);
    for (std::size_t k = 2; k < group->size(); ++k) acc = state.contract((*group)[k], acc);
  }
}

// Index of the drawn candidate among `top`, which is sorted cheapest first.
std::size_t draw(const std::vector<Candidate>& top, double tau, Rng& rng) {
  if (top.size() == 1) return 0;
  const double cmin = top.front().cost;
  std::vector<double> weights(top.size(), 0.0);
  if (!std::isfinite(cmin)) {
    for (std::size_t k = 0; k < top.size(); ++k) weights[k] = top[k].cost == cmin ? 1.0 : 0.0;
  } else {
    const double scale = tau * std::max(1.0, std::abs(cmin));
    for (std::size_t k = 0; k < top.size(); ++k) {
      weights[k] = std::isfinite(top[k].cost) ? std::exp(-(top[k].cost - cmin) / scale) : 0.0;
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  for (std::size_t k = 0; k < top.size(); ++k) {
    if (u < weights[k]) return k;
    u -= weights[k];
  }
  return 0;
}

void pairwise_phase(GreedyState& state, const GreedyMode& mode) {
  CandidateHeap heap;
  const auto live_count = static_cast<TermId>(state.num_terms());
  for (TermId a = 0; a < live_count; ++a) {
    if (!state.alive(a)) continue;
    state.for_each_candidate(a, [&](const Candidate& c) {
      if (c.a == a) heap.push(c);
    });
  }

  auto push_neighbors = [&](TermId c) {
    state.for_each_candidate(c, [&](const Candidate& cand) { heap.push(cand); });
  };

  if (!mode.sampled) {
    while (!heap.empty()) {
      Candidate best = heap.top();
      heap.pop();
      if (!state.alive(best.a) || !state.alive(best.b)) continue;
      push_neighbors(state.contract(best.a, best.b));
    }
    return;
  }

  Rng rng(mode.seed);
  const auto top_b = static_cast<std::size_t>(mode.sampling.top_b);
  std::vector<Candidate> top;
  top.reserve(top_b);
  while (true) {
    top.clear();
    while (top.size() < top_b && !heap.empty()) {
      Candidate c = heap.top();
      heap.pop();
      if (state.alive(c.a) && state.alive(c.b)) top.push_back(c);
    }
    if (top.empty()) break;
    const std::size_t pick = draw(top, mode.sampling.tau, rng);
    for (std::size_t k = 0; k < top.size(); ++k) {
      if (k != pick) heap.push(top[k]);
    }
    push_neighbors(state.contract(top[pick].a, top[pick].b));
  }
}

void outer_product_phase(GreedyState& state) {
  using Entry = std::pair<double, TermId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> smallest;
  for (TermId t = 0; t < state.num_terms(); ++t) {
    if (state.alive(t)) smallest.emplace(state.size(t), t);
  }
  while (smallest.size() > 1) {
    const TermId x = smallest.top().second;
    smallest.pop();
    const TermId y = smallest.top().second;
    smallest.pop();
    const TermId c = state.contract(x, y);
    smallest.emplace(state.size(c), c);
  }
}

}  // namespace

ContractionPath greedy_path(const TensorNetwork& network, const CostFnSpec& cost_fn,
                            const GreedyMode& mode) {
  if (mode.sampled && (mode.sampling.top_b < 1 || !(mode.sampling.tau > 0.0))) {
    throw Error("sampling requires top_b >= 1 and tau > 0");
  }
  const std::size_t n = network.num_inputs();
  GreedyState state(network, cost_fn);
  if (n > 1) {
    hadamard_phase(state, n);
    pairwise_phase(state, mode);
    outer_product_phase(state);
  }

  ContractionPath path;
  path.steps.reserve(state.steps().size());
  detail::LiveList list(2 * n);
  for (std::size_t t = 0; t < n; ++t) list.insert(t);
  std::size_t next = n;
  for (auto [a, b] : state.steps()) {
    path.steps.push_back({list.position_of(a), list.position_of(b)});
    list.erase(a);
    list.erase(b);
    list.insert(next++);
  }
  return path;
}

}  // namespace tnpath
