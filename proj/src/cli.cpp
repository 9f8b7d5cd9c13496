#include "gcs/cli.hpp"

#include "gcs/errors.hpp"
#include "gcs/report.hpp"
#include "gcs/scenario.hpp"
#include "gcs/sweep.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <fstream>
#include <sstream>

namespace gcs {

namespace {

struct Loaded {
  std::optional<LoadedScenario> scenario;
  int code = exit_ok;
};

Loaded load(const std::filesystem::path& path, std::ostream& err) {
  Loaded out;
  try {
    out.scenario = load_scenario(path);
  } catch (const ParseError& e) {
    err << path.string() << ": " << e.what() << "\n";
    out.code = exit_parse;
  } catch (const ConfigError& e) {
    err << path.string() << ": " << e.what() << "\n";
    out.code = exit_invalid;
  }
  return out;
}

bool validate(const Scenario& sc, std::ostream& err) {
  const auto problems = validate_scenario(sc);
  if (problems.empty()) {
    for (const auto& w : scenario_warnings(sc)) spdlog::warn("{}", w);
    return true;
  }
  err << "scenario invalid:\n";
  for (const auto& m : problems) err << "  " << m << "\n";
  return false;
}

}  // namespace

int cmd_run(const std::filesystem::path& scenario, std::optional<std::uint64_t> seed,
            const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err) {
  auto loaded = load(scenario, err);
  if (!loaded.scenario) return loaded.code;
  auto& sc = loaded.scenario->scenario;
  if (seed) sc.seed = *seed;
  if (!validate(sc, err)) return exit_invalid;

  spdlog::info("running {} (hash {}, seed {}, {} nodes, s_max {})", scenario.string(), loaded.scenario->hash, sc.seed,
               sc.graph.node_count(), sc.params.s_max);
  const auto t0 = std::chrono::steady_clock::now();
  Trace trace;
  try {
    trace = run(sc);
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return exit_failure;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_run_outputs(out_dir, trace, loaded.scenario->hash, sc.seed);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return exit_failure;
  }
  const auto total = trace.violation_total();
  spdlog::info("{} cycles, {} events in {:.3f} s wall", trace.cycles_completed, trace.stats.events, wall);
  out << "max local skew " << format_double(trace.bounds.max_observed_local) << " (bound "
      << format_double(trace.bounds.local_bound) << ")\n"
      << "max global skew " << format_double(trace.bounds.max_observed_global) << " (bound "
      << format_double(trace.bounds.global_bound) << ")\n"
      << "violations " << total << (trace.aborted ? " (aborted)" : "") << "\n";
  for (const auto& [kind, c] : trace.violation_counts) spdlog::error("{}: {} violations", kind, c);
  return total == 0 && !trace.aborted ? exit_ok : exit_violations;
}

int cmd_check(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err) {
  auto loaded = load(scenario, err);
  if (!loaded.scenario) return loaded.code;
  const auto& sc = loaded.scenario->scenario;
  if (!validate(sc, err)) return exit_invalid;
  try {
    out << format_static_report(static_report(sc));
  } catch (const ParameterError& e) {
    err << e.what() << "\n";
    return exit_invalid;
  }
  return exit_ok;
}

int cmd_sweep(const std::filesystem::path& scenario, const std::filesystem::path& grid, std::size_t seeds,
              const std::filesystem::path& out_dir, std::size_t threads, std::ostream& out, std::ostream& err) {
  auto loaded = load(scenario, err);
  if (!loaded.scenario) return loaded.code;
  SweepGrid g;
  try {
    std::ifstream in(grid);
    if (!in) {
      err << "cannot read " << grid.string() << "\n";
      return exit_failure;
    }
    g = parse_sweep_grid(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    err << grid.string() << ": " << e.what() << "\n";
    return exit_parse;
  } catch (const ParseError& e) {
    err << grid.string() << ": " << e.what() << "\n";
    return exit_parse;
  }
  if (seeds == 0) {
    err << "need at least one seed\n";
    return exit_invalid;
  }
  std::vector<std::uint64_t> seed_list;
  for (std::size_t i = 0; i < seeds; ++i) seed_list.push_back(loaded.scenario->scenario.seed + i);
  const auto base = scenario.parent_path().empty() ? std::filesystem::path(".") : scenario.parent_path();
  const auto rows = run_sweep(loaded.scenario->document, base, g, seed_list, threads);
  try {
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir / "sweep.csv", std::ios::binary);
    write_sweep_csv(f, rows);
    std::ofstream e(out_dir / "sweep_edges.csv", std::ios::binary);
    write_sweep_edges_csv(e, rows);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return exit_failure;
  }
  std::size_t ok = 0;
  for (const auto& r : rows) ok += r.status == "ok";
  out << rows.size() << " runs, " << ok << " ok\n";
  return exit_ok;
}

}  // namespace gcs
