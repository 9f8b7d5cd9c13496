#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace gcs {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,  // I/O or unexpected error
  exit_parse = 2,
  exit_invalid = 3,
  exit_violations = 4,
};

/// Loads, validates and runs a scenario, writing trace.csv, summary.json and
/// violations.json to `out_dir`. Diagnostics go to `err`.
int cmd_run(const std::filesystem::path& scenario, std::optional<std::uint64_t> seed,
            const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// Prints the static bound report without simulating.
int cmd_check(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

/// Runs the scenario over a parameter grid and `seeds` consecutive seeds starting at
/// the scenario's own; writes sweep.csv and sweep_edges.csv. Per-run failures are rows,
/// not errors.
int cmd_sweep(const std::filesystem::path& scenario, const std::filesystem::path& grid, std::size_t seeds,
              const std::filesystem::path& out_dir, std::size_t threads, std::ostream& out, std::ostream& err);

}  // namespace gcs
