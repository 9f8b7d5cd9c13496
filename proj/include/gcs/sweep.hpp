#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace gcs {

/// Axes of a parameter sweep; keys among theta, mu, eps_d, eps_m, jitter, n.
struct SweepGrid {
  std::map<std::string, std::vector<double>> axes;
};

/// Parses {"theta": [..], "mu": [..], ...}. Throws ParseError on unknown axes or empty lists.
SweepGrid parse_sweep_grid(const nlohmann::json& doc);

using SweepPoint = std::map<std::string, double>;

/// Cartesian product in a fixed axis order (theta, mu, eps_d, eps_m, jitter, n),
/// last axis fastest.
std::vector<SweepPoint> expand_grid(const SweepGrid& grid);

/// Scenario document with the point's values substituted. Edge parameters go into
/// edge_defaults and every explicit edge; n needs a line, ring, star or random generator.
/// Throws ConfigError when an axis cannot be applied.
nlohmann::json apply_point(const nlohmann::json& scenario, const SweepPoint& point);

struct SweepRow {
  std::size_t point = 0;
  std::uint64_t seed = 0;
  SweepPoint values;
  std::string status;  // ok, violations, invalid, parse_error, error
  int exit_code = 0;
  std::string error;
  double max_local = 0.0;
  double max_global = 0.0;
  double local_bound = 0.0;
  double global_bound = 0.0;
  std::uint64_t violations = 0;
  std::uint64_t cycles = 0;
  std::vector<double> edge_worst_delay;
  std::vector<double> edge_kappa;  // kappa / worst_delay is the delta/d ratio
};

/// Runs every (point, seed) pair on `threads` workers (0: hardware concurrency).
/// Failures are recorded in the row; the sweep always completes.
std::vector<SweepRow> run_sweep(const nlohmann::json& scenario, const std::filesystem::path& base_dir,
                                const SweepGrid& grid, const std::vector<std::uint64_t>& seeds,
                                std::size_t threads = 0);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// One line per (row, edge) with kappa, worst delay and their ratio.
void write_sweep_edges_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace gcs
