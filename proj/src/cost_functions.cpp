#include "tnpath/cost_functions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace tnpath {
namespace {

struct Registration {
  const char* name;
  std::map<std::string, double> defaults;
};

const std::vector<Registration>& registry() {
  static const std::vector<Registration> regs = {
      {"standard", {}},
      {"balanced-min", {}},
      {"skewed-max", {}},
      {"weighted", {{"alpha", 1.0}, {"beta", 1.0}}},
      {"log-ratio", {}},
      {"removal-bonus", {{"gamma", 1.0}}},
  };
  return regs;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string CostFnSpec::id() const {
  if (params.empty()) return name;
  std::string out = name + "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    out += (first ? "" : ",") + k + "=" + format_number(v);
    first = false;
  }
  return out + ")";
}

std::vector<std::string> registered_cost_fns() {
  std::vector<std::string> names;
  for (const auto& r : registry()) names.emplace_back(r.name);
  return names;
}

CostFnSpec make_cost_fn(const std::string& name, std::map<std::string, double> params) {
  auto it = std::find_if(registry().begin(), registry().end(),
                         [&](const Registration& r) { return name == r.name; });
  if (it == registry().end()) {
    std::string msg = "unknown cost function '" + name + "'; registered:";
    for (const auto& r : registry()) msg += std::string(" ") + r.name;
    throw Error(msg);
  }
  for (const auto& [k, v] : params) {
    if (it->defaults.count(k) == 0) {
      throw Error("cost function '" + name + "' has no parameter '" + k + "'");
    }
    if (!std::isfinite(v) || v < 0.0) {
      throw Error("parameter '" + k + "' of '" + name + "' must be finite and >= 0");
    }
  }
  for (const auto& [k, v] : it->defaults) params.emplace(k, v);
  return CostFnSpec{name, std::move(params)};
}

CostFnSpec parse_cost_fn(const std::string& text) {
  const std::string s = trim(text);
  auto open = s.find('(');
  if (open == std::string::npos) return make_cost_fn(s);
  if (s.back() != ')') throw Error("malformed cost function '" + text + "'");
  std::map<std::string, double> params;
  std::istringstream body(s.substr(open + 1, s.size() - open - 2));
  std::string item;
  while (std::getline(body, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("malformed cost function parameter '" + item + "'");
    const std::string value = trim(item.substr(eq + 1));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw Error("cost function parameter '" + item + "' is not a number");
    }
    params[trim(item.substr(0, eq))] = v;
  }
  return make_cost_fn(trim(s.substr(0, open)), std::move(params));
}

double pair_cost(const CostFnSpec& spec, const PairCandidate& c) {
  return detail::CostEvaluator(spec)(c.size1, c.size2, c.size12, c.removed);
}

std::vector<CostFnSpec> default_cost_fn_set() {
  std::vector<CostFnSpec> set = {make_cost_fn("standard"), make_cost_fn("balanced-min"),
                                 make_cost_fn("skewed-max")};
  const double grid[] = {0.0, 0.5, 1.0, 2.0};
  for (double alpha : grid) {
    for (double beta : grid) {
      // (1,1), (0,1) and (1,0) reproduce standard, balanced-min and skewed-max.
      if ((alpha == 1.0 && beta == 1.0) || (alpha == 0.0 && beta == 1.0) ||
          (alpha == 1.0 && beta == 0.0)) {
        continue;
      }
      set.push_back(make_cost_fn("weighted", {{"alpha", alpha}, {"beta", beta}}));
    }
  }
  set.push_back(make_cost_fn("log-ratio"));
  set.push_back(make_cost_fn("removal-bonus"));
  return set;
}

namespace detail {

CostEvaluator::CostEvaluator(const CostFnSpec& spec) {
  const auto param = [&](const char* key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
  };
  if (spec.name == "standard") {
    kind_ = Kind::standard;
  } else if (spec.name == "balanced-min") {
    kind_ = Kind::balanced_min;
  } else if (spec.name == "skewed-max") {
    kind_ = Kind::skewed_max;
  } else if (spec.name == "weighted") {
    kind_ = Kind::weighted;
    alpha_ = param("alpha", 1.0);
    beta_ = param("beta", 1.0);
  } else if (spec.name == "log-ratio") {
    kind_ = Kind::log_ratio;
  } else if (spec.name == "removal-bonus") {
    kind_ = Kind::removal_bonus;
    gamma_ = param("gamma", 1.0);
  } else {
    // Re-run validation for the diagnostic.
    make_cost_fn(spec.name, spec.params);
    throw Error("unknown cost function '" + spec.name + "'");
  }
}

double CostEvaluator::operator()(double size1, double size2, double size12, int removed) const {
  const double hi = std::max(size1, size2);
  const double lo = std::min(size1, size2);
  double cost = 0.0;
  switch (kind_) {
    case Kind::standard:
      cost = size12 - (size1 + size2);
      break;
    case Kind::balanced_min:
      cost = size12 - lo;
      break;
    case Kind::skewed_max:
      cost = size12 - hi;
      break;
    case Kind::weighted:
      // 0 * inf would poison an otherwise finite score.
      cost = size12 - (alpha_ == 0.0 ? 0.0 : alpha_ * hi) - (beta_ == 0.0 ? 0.0 : beta_ * lo);
      break;
    case Kind::log_ratio:
      cost = std::log2(size12) - std::log2(size1 + size2);
      break;
    case Kind::removal_bonus:
      cost = size12 - (size1 + size2) - gamma_ * removed;
      break;
  }
  return std::isnan(cost) ? std::numeric_limits<double>::infinity() : cost;
}

}  // namespace detail
}  // namespace tnpath
