// tnpath: contraction path optimizer command line.
//
//   tnpath optimize  --expr "i,ij,jk,km->m" --sizes i=3,j=2,k=3,m=2
//   tnpath evaluate  --input net.json --path "[[0,1],[0,1]]"
//   tnpath bench     --dir instances/ --paths 128 --repeats 5
//   tnpath gen       --family regular --n 1000 --degree 3 --extent 2 --seed 1
//
// Exit codes: 0 success, 1 input error, 2 configuration error, 3 nothing to run.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tnpath/evaluator.hpp"
#include "tnpath/expression_io.hpp"
#include "tnpath/generators.hpp"
#include "tnpath/optimize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tnpath;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kConfigError = 2;
constexpr int kNothingToRun = 3;

struct InputFlags {
  std::string input;
  std::string expr;
  std::string sizes;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--input", input, "Instance document (JSON)");
    cmd.add_option("--expr", expr, "Einsum string, e.g. \"ij,jk->ik\"");
    cmd.add_option("--sizes", sizes, "Extents for --expr, e.g. i=2,j=3,k=4");
  }

  TensorNetwork load() const {
    if (input.empty() == expr.empty()) throw Error("give exactly one of --input or --expr");
    if (!input.empty()) return read_instance_file(input).network;
    return parse_einsum_string(expr, parse_sizes(sizes));
  }
};

struct OptimizeFlags {
  std::string objective = "flops";
  std::optional<std::int64_t> paths;
  std::optional<std::int64_t> timeout_ms;
  std::uint64_t seed = 0;
  std::string cost_fn = "auto";
  int threads = 1;
  int top_b = 4;
  double tau = 1.0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--objective", objective, "flops | size")->capture_default_str();
    cmd.add_option("--paths", paths, "Total paths to generate (default 128)");
    cmd.add_option("--timeout-ms", timeout_ms, "Wall-clock budget in milliseconds");
    cmd.add_option("--seed", seed, "Run seed")->capture_default_str();
    cmd.add_option("--cost-fn", cost_fn, "Cost function name, name(k=v,...), or auto")
        ->capture_default_str();
    cmd.add_option("--threads", threads, "Threads for sampled trials")->capture_default_str();
    cmd.add_option("--top-b", top_b, "Candidates considered per sampled step")
        ->capture_default_str();
    cmd.add_option("--tau", tau, "Sampling temperature")->capture_default_str();
  }

  OptimizeConfig config() const {
    OptimizeConfig cfg;
    cfg.objective = parse_objective(objective);
    if (paths && timeout_ms) throw ConfigError("give at most one of --paths and --timeout-ms");
    if (timeout_ms) {
      cfg.budget = WallClockBudget{*timeout_ms};
    } else {
      cfg.budget = PathCountBudget{paths.value_or(128)};
    }
    cfg.seed = seed;
    if (cost_fn != "auto") {
      try {
        cfg.cost_fns = {parse_cost_fn(cost_fn)};
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
    cfg.sampling = {top_b, tau};
    cfg.threads = threads;
    validate(cfg);
    return cfg;
  }
};

json path_json(const ContractionPath& path) {
  json out = json::array();
  for (const auto& s : path.steps) out.push_back({s.first, s.second});
  return out;
}

json stats_json(const PathStats& stats, bool with_path) {
  json out;
  if (with_path) out["path"] = path_json(stats.path);
  out["total_flops"] = stats.total_flops;
  out["max_intermediate_size"] = stats.max_intermediate_size;
  out["tree_depth"] = stats.tree_depth;
  if (!stats.cost_fn_used.empty()) out["cost_fn"] = stats.cost_fn_used;
  return out;
}

json report_json(const OptimizeReport& report, Objective objective) {
  json out;
  out["objective"] = to_string(objective);
  out["best"] = stats_json(report.best, true);
  out["selected_cost_fn"] = report.selected_cost_fn;
  out["paths_evaluated"] = report.paths_evaluated;
  out["sweep_complete"] = report.sweep_complete;
  json per = json::object();
  for (const auto& [name, stats] : report.per_cost_fn) per[name] = stats_json(stats, false);
  out["per_cost_fn"] = per;
  out["elapsed_ms"] = report.elapsed_ms;
  return out;
}

std::string num(double v) { return json(v).dump(); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void summary(const OptimizeReport& r) {
  std::cerr << "best flops " << num(r.best.total_flops) << ", max size "
            << num(r.best.max_intermediate_size) << " (" << r.selected_cost_fn << "), "
            << r.paths_evaluated << " paths in " << r.elapsed_ms << " ms\n";
}

int run_optimize(const InputFlags& in, const OptimizeFlags& opt, const std::string& format) {
  const auto network = in.load();
  const auto cfg = opt.config();
  const auto report = optimize(network, cfg);
  if (format == "json") {
    std::cout << report_json(report, cfg.objective).dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "selected_cost_fn,total_flops,max_intermediate_size,tree_depth,"
                 "paths_evaluated,elapsed_ms,path\n"
              << csv_quote(report.selected_cost_fn) << ',' << num(report.best.total_flops)
              << ',' << num(report.best.max_intermediate_size) << ',' << report.best.tree_depth
              << ',' << report.paths_evaluated << ',' << num(report.elapsed_ms) << ','
              << csv_quote(serialize_path(report.best.path)) << "\n";
  } else {
    std::cout << serialize_path(report.best.path) << "\n";
  }
  summary(report);
  return kOk;
}

std::string read_text(const std::string& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw Error("cannot open " + file);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

int run_evaluate(const InputFlags& in, const std::string& path_arg, const std::string& tree_file,
                 const std::string& format) {
  const auto network = in.load();
  const auto first = path_arg.find_first_not_of(" \t");
  const bool inline_path = first != std::string::npos && path_arg[first] == '[';
  const auto path = parse_path(inline_path ? path_arg : read_text(path_arg));
  const auto stats = evaluate(network, path);
  if (format == "csv") {
    std::cout << "total_flops,max_intermediate_size,tree_depth,path\n"
              << num(stats.total_flops) << ',' << num(stats.max_intermediate_size) << ','
              << stats.tree_depth << ',' << csv_quote(serialize_path(stats.path)) << "\n";
  } else {
    std::cout << stats_json(stats, true).dump(2) << "\n";
  }
  if (!tree_file.empty()) {
    std::ofstream out(tree_file);
    if (!out) throw Error("cannot write " + tree_file);
    out << export_tree(contraction_tree(network, path));
  }
  return kOk;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int run_bench(const std::string& dir, const OptimizeFlags& opt, int repeats,
              const std::string& format) {
  const auto cfg = opt.config();
  if (repeats < 1) throw ConfigError("--repeats must be >= 1");
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  json rows = json::array();
  if (format == "csv") {
    std::cout << "name,n,best_flops,best_max_size,selected_cost_fn,paths_evaluated,elapsed_ms\n";
  }
  int ran = 0;
  for (const auto& file : files) {
    std::optional<InstanceDocument> doc;
    try {
      doc = read_instance_file(file);
    } catch (const Error& e) {
      std::cerr << "warning: skipping " << file.string() << ": " << e.what() << "\n";
      continue;
    }
    const std::string name = doc->name.empty() ? file.stem().string() : doc->name;
    std::optional<OptimizeReport> first;
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
      auto report = optimize(doc->network, cfg);
      times.push_back(report.elapsed_ms);
      if (!first) first = std::move(report);
    }
    const double elapsed = median(times);
    ++ran;
    if (format == "csv") {
      std::cout << csv_quote(name) << ',' << doc->network.num_inputs() << ','
                << num(first->best.total_flops) << ',' << num(first->best.max_intermediate_size)
                << ',' << csv_quote(first->selected_cost_fn) << ',' << first->paths_evaluated
                << ',' << num(elapsed) << "\n";
    } else {
      rows.push_back({{"name", name},
                      {"n", doc->network.num_inputs()},
                      {"best_flops", first->best.total_flops},
                      {"best_max_size", first->best.max_intermediate_size},
                      {"selected_cost_fn", first->selected_cost_fn},
                      {"paths_evaluated", first->paths_evaluated},
                      {"elapsed_ms", elapsed}});
    }
    std::cerr << name << ": " << num(first->best.total_flops) << " flops, median "
              << elapsed << " ms\n";
  }
  if (format != "csv") std::cout << rows.dump(2) << "\n";
  if (ran == 0) {
    std::cerr << "no instances ran in " << dir << "\n";
    return kNothingToRun;
  }
  return kOk;
}

struct GenFlags {
  std::string family;
  int rows = 0;
  int cols = 0;
  int n = 0;
  int degree = 3;
  double edge_prob = 0.5;
  std::int64_t extent = 2;
  std::uint64_t seed = 0;
  std::string out;
  std::string name;
};

int run_gen(const GenFlags& g) {
  InstanceDocument doc{
      [&] {
        if (g.family == "grid") return gen_grid_network(g.rows, g.cols, g.extent, g.seed);
        if (g.family == "regular") return gen_regular_network(g.n, g.degree, g.extent, g.seed);
        if (g.family == "random") return gen_random_network(g.n, g.edge_prob, g.extent, g.seed);
        throw Error("unknown family '" + g.family + "' (expected grid, regular or random)");
      }(),
      g.name, g.family};
  if (doc.name.empty()) {
    std::ostringstream name;
    name << g.family;
    if (g.family == "grid") {
      name << "-" << g.rows << "x" << g.cols;
    } else if (g.family == "regular") {
      name << "-n" << g.n << "-d" << g.degree;
    } else {
      name << "-n" << g.n << "-p" << g.edge_prob;
    }
    name << "-s" << g.seed;
    doc.name = name.str();
  }
  const std::string text = serialize_instance(doc);
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw Error("cannot write " + g.out);
    f << text;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy tensor network contraction path optimizer"};
  app.require_subcommand(1);

  InputFlags in;
  OptimizeFlags opt;
  std::string format = "json";

  auto* optimize_cmd = app.add_subcommand("optimize", "Find a contraction path");
  in.add_to(*optimize_cmd);
  opt.add_to(*optimize_cmd);
  optimize_cmd->add_option("--output", format, "json | csv | path")
      ->check(CLI::IsMember({"json", "csv", "path"}))
      ->capture_default_str();
  optimize_cmd->footer(
      "CSV columns: selected_cost_fn,total_flops,max_intermediate_size,tree_depth,"
      "paths_evaluated,elapsed_ms,path");

  std::string path_arg;
  std::string tree_file;
  InputFlags eval_in;
  std::string eval_format = "json";
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score and validate a path");
  eval_in.add_to(*evaluate_cmd);
  evaluate_cmd->add_option("--path", path_arg, "Path file, or inline \"[[0,1],...]\"")
      ->required();
  evaluate_cmd->add_option("--tree", tree_file, "Write the contraction tree to this file");
  evaluate_cmd->add_option("--output", eval_format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  evaluate_cmd->footer("CSV columns: total_flops,max_intermediate_size,tree_depth,path");

  std::string bench_dir;
  int repeats = 5;
  OptimizeFlags bench_opt;
  std::string bench_format = "csv";
  auto* bench_cmd = app.add_subcommand("bench", "Optimize every instance in a directory");
  bench_cmd->add_option("--dir", bench_dir, "Directory of *.json instance documents")
      ->required();
  bench_opt.add_to(*bench_cmd);
  bench_cmd->add_option("--repeats", repeats, "Runs per instance; median time reported")
      ->capture_default_str();
  bench_cmd->add_option("--output", bench_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bench_cmd->footer(
      "CSV columns: name,n,best_flops,best_max_size,selected_cost_fn,paths_evaluated,"
      "elapsed_ms");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance document");
  gen_cmd->add_option("--family", gen.family, "grid | regular | random")->required();
  gen_cmd->add_option("--rows", gen.rows, "Grid rows");
  gen_cmd->add_option("--cols", gen.cols, "Grid columns");
  gen_cmd->add_option("--n", gen.n, "Vertex count (regular, random)");
  gen_cmd->add_option("--degree", gen.degree, "Vertex degree (regular)")->capture_default_str();
  gen_cmd->add_option("--edge-prob", gen.edge_prob, "Edge probability (random)")
      ->capture_default_str();
  gen_cmd->add_option("--extent", gen.extent, "Extent of every index")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output file (default: standard output)");
  gen_cmd->add_option("--name", gen.name, "Instance name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*optimize_cmd) return run_optimize(in, opt, format);
    if (*evaluate_cmd) return run_evaluate(eval_in, path_arg, tree_file, eval_format);
    if (*bench_cmd) return run_bench(bench_dir, bench_opt, repeats, bench_format);
    if (*gen_cmd) return run_gen(gen);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
