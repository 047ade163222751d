// Serial reference vs OpenMP stage-2 trials on generated instances.
//
//   bench_optimize [--paths N] [--threads T] [--repeats R]

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tnpath/generators.hpp"
#include "tnpath/greedy.hpp"
#include "tnpath/optimize.hpp"

using namespace tnpath;

namespace {

template <typename Fn>
double median_ms(int repeats, Fn&& fn) {
  std::vector<double> times;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    times.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimize() serial vs parallel"};
  std::int64_t paths = 128;
  int threads = 4;
  int repeats = 3;
  app.add_option("--paths", paths)->capture_default_str();
  app.add_option("--threads", threads)->capture_default_str();
  app.add_option("--repeats", repeats)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  struct Case {
    std::string name;
    TensorNetwork net;
  };
  std::vector<Case> cases;
  cases.push_back({"grid-16x16", gen_grid_network(16, 16, 2, 0)});
  cases.push_back({"regular-500-d3", gen_regular_network(500, 3, 2, 1)});
  cases.push_back({"regular-2000-d3", gen_regular_network(2000, 3, 2, 2)});
  cases.push_back({"random-200-p0.02", gen_random_network(200, 0.02, 2, 3)});

  std::cout << std::left << std::setw(20) << "instance" << std::right << std::setw(14)
            << "single_ms" << std::setw(14) << "serial_ms" << std::setw(14) << "parallel_ms"
            << std::setw(10) << "speedup" << std::setw(8) << "same" << "\n";
  for (const auto& c : cases) {
    OptimizeConfig cfg;
    cfg.budget = PathCountBudget{paths};
    cfg.threads = threads;
    const double single =
        median_ms(repeats, [&] { (void)greedy_path(c.net, make_cost_fn("standard")); });
    OptimizeReport serial, parallel;
    const double t_serial = median_ms(repeats, [&] { serial = optimize_serial(c.net, cfg); });
    const double t_parallel = median_ms(repeats, [&] { parallel = optimize(c.net, cfg); });
    const bool same = serial.best.path == parallel.best.path &&
                      serial.best.total_flops == parallel.best.total_flops;
    std::cout << std::left << std::setw(20) << c.name << std::right << std::fixed
              << std::setprecision(2) << std::setw(14) << single << std::setw(14) << t_serial
              << std::setw(14) << t_parallel << std::setw(10) << t_serial / t_parallel
              << std::setw(8) << (same ? "yes" : "NO") << "\n";
  }
  return 0;
}
