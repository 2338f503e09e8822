// clsp_bench: generate suites, solve single instances, run benchmarks and sweeps.
//
// Exit codes: 0 success, 2 configuration or input error, 3 infeasible instance.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "clsp/clsp.hpp"

namespace fs = std::filesystem;
using namespace clsp;

namespace {

int cmd_gen(const std::string& size, std::uint64_t seed, std::size_t limit, const std::string& out) {
  const auto [n, t] = parse_size(size);
  fs::create_directories(out);
  std::ofstream manifest(fs::path(out) / "manifest.txt");
  if (!manifest) throw ConfigError("cannot write to " + out);
  manifest << "# id levels\n";
  const auto suite = generate_suite(n, t, seed, limit);
  for (const auto& e : suite) {
    save_instance((fs::path(out) / (e.id + ".clsp")).string(), e.instance);
    manifest << e.id << ' ' << e.levels.letters() << '\n';
  }
  std::cout << "wrote " << suite.size() << " instances to " << out << '\n';
  return 0;
}

struct SolveArgs {
  std::string instance, method, reference;
  std::optional<int> m, iteration_cap;
  std::optional<double> w;
  std::uint64_t seed = 1;
  bool restricted = false, unrestricted = false, print_plan = false;
};

int cmd_solve(const SolveArgs& a) {
  const Instance inst = load_instance(a.instance);
  const std::string id = fs::path(a.instance).stem().string();
  const MethodInfo info = require_method(a.method);
  MethodParams p;
  p.m = a.m;
  p.w = a.w;
  p.seed = a.seed;
  p.iteration_cap = a.iteration_cap;
  if (a.restricted) p.restricted = true;
  if (a.unrestricted) p.restricted = false;
  if (p.w && !(*p.w >= 0 && *p.w <= 1)) throw ConfigError("--w must lie in [0, 1]");

  std::optional<double> reference;
  if (!a.reference.empty()) {
    const auto table = load_references(a.reference);
    if (auto it = table.find(id); it != table.end()) {
      reference = it->second;
    } else {
      std::cerr << "note: no reference cost for " << id << '\n';
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  MethodRun run = run_method(inst, info, p, reference);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::cout << "instance " << id << '\n' << "method " << info.name << '\n';
  if (run.m) std::cout << "m " << *run.m << '\n';
  if (run.w) std::cout << "w " << *run.w << '\n';
  if (run.seed) std::cout << "seed " << *run.seed << '\n';
  std::cout << "cost " << run.cost.total << '\n'
            << "setup_cost " << run.cost.setup_total << '\n'
            << "holding_cost " << run.cost.holding_total << '\n';
  if (reference) std::cout << "reference " << *reference << "\ngap_pct " << gap_pct(run.cost.total, *reference) << '\n';
  if (!run.extra.empty()) std::cout << "extra " << run.extra << '\n';
  std::cout << "time_s " << secs << '\n';
  if (a.print_plan) {
    std::cout << "plan\n";
    for (std::size_t i = 0; i < inst.items(); ++i) {
      for (std::size_t t = 0; t < inst.periods(); ++t) std::cout << (t ? " " : "") << run.plan.lot(i, t);
      std::cout << '\n';
    }
  }
  return 0;
}

void print_notes(const std::vector<std::string>& notes) {
  for (const auto& n : notes) std::cerr << "note: " << n << '\n';
}

int cmd_bench(const std::string& config, const std::string& out, bool timing) {
  const auto kv = KeyValues::load(config);
  BenchConfig cfg = read_bench_config(kv);
  if (timing) cfg.record_time = true;
  const auto suite = load_suite(cfg.suite);
  const RunReport rep = run_bench(cfg, suite);
  write_bench_outputs(out, cfg, rep);
  print_notes(rep.notes);
  write_aggregate_csv(std::cout, rep.aggregates, cfg.record_time);
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& out, bool timing) {
  const auto kv = KeyValues::load(config);
  SweepConfig cfg = read_sweep_config(kv);
  if (timing) cfg.record_time = true;
  const auto suite = load_suite(cfg.suite);
  const SweepReport rep = run_sweep(cfg, suite);
  write_sweep_outputs(out, cfg, rep);
  print_notes(rep.notes);
  write_sweep_grid(std::cout, cfg, rep, false);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacitated lot-sizing heuristics and benchmark harness"};
  app.require_subcommand(1);

  std::string size, out, config;
  std::uint64_t gen_seed = 1;
  std::size_t limit = 0;
  bool timing = false;
  SolveArgs solve;

  auto* gen = app.add_subcommand("gen", "Generate a benchmark suite");
  gen->add_option("--size", size, "Items x periods, e.g. 12x12")->required();
  gen->add_option("--seed", gen_seed, "Suite seed");
  gen->add_option("--limit", limit, "Keep only the first N instances (0 = all 360)");
  gen->add_option("--out", out, "Output directory")->required();

  auto* sol = app.add_subcommand("solve", "Solve one instance with one method");
  sol->add_option("--instance", solve.instance, "Instance file")->required();
  sol->add_option("--method", solve.method, "Method name, e.g. HeinB, RPP3, ARPP3-TS")->required();
  sol->add_option("--m", solve.m, "Repetitions per run");
  sol->add_option("--w", solve.w, "Perturbation level in [0, 1]");
  sol->add_option("--seed", solve.seed, "Random seed");
  sol->add_option("--F", solve.iteration_cap, "Tabu iteration cap");
  sol->add_flag("--restricted", solve.restricted, "Restricted tabu neighbourhood");
  sol->add_flag("--unrestricted", solve.unrestricted, "Full tabu neighbourhood");
  sol->add_option("--reference", solve.reference, "Reference file with 'id cost' lines");
  sol->add_flag("--plan", solve.print_plan, "Print the production plan");

  auto* bench = app.add_subcommand("bench", "Run methods over a suite");
  bench->add_option("--config", config, "Config file")->required();
  bench->add_option("--out", out, "Output directory")->required();
  bench->add_flag("--timing", timing, "Write run times into the CSV");

  auto* sweep = app.add_subcommand("sweep", "Sweep (m, w) for one randomized method");
  sweep->add_option("--config", config, "Config file")->required();
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_flag("--timing", timing, "Write run times into the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(size, gen_seed, limit, out);
    if (*sol) return cmd_solve(solve);
    if (*bench) return cmd_bench(config, out, timing);
    if (*sweep) return cmd_sweep(config, out, timing);
  } catch (const InfeasibleInput& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
