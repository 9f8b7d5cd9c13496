#include "gcs/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("gcs_sim");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("GCS_SIM_LOG")) {
    const std::string lvl = env;
    if (lvl == "error") spdlog::set_level(spdlog::level::err);
    else if (lvl == "info") spdlog::set_level(spdlog::level::info);
    else if (lvl == "debug") spdlog::set_level(spdlog::level::debug);
    else spdlog::warn("GCS_SIM_LOG={} not one of error, info, debug", lvl);
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Gradient clock synchronisation simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir;
  std::string grid;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  std::size_t threads = 0;

  auto* run = app.add_subcommand("run", "simulate a scenario and write trace, summary and violations");
  run->add_option("--scenario", scenario, "scenario JSON")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_dir, "output directory")->required();

  auto* check = app.add_subcommand("check", "print static bounds without simulating");
  check->add_option("--scenario", scenario, "scenario JSON")->required();

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
  sweep->add_option("--scenario", scenario, "scenario JSON")->required();
  sweep->add_option("--grid", grid, "grid JSON")->required();
  sweep->add_option("--seeds", seeds, "seeds per grid point")->default_val(1);
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_option("--threads", threads, "worker threads, 0 for all cores")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gcs::exit_parse;
  }

  if (*run) {
    std::optional<std::uint64_t> s;
    if (*seed_opt) s = seed;
    return gcs::cmd_run(scenario, s, out_dir, std::cout, std::cerr);
  }
  if (*check) return gcs::cmd_check(scenario, std::cout, std::cerr);
  return gcs::cmd_sweep(scenario, grid, seeds, out_dir, threads, std::cout, std::cerr);
}
