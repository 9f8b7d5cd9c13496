#pragma once

#include "gcs/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace gcs {

/// Everything the check command prints, computed without running the simulation.
struct StaticReport {
  double theta = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  std::vector<double> edge_kappa;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double kappa_diameter = 0.0;
  std::size_t hop_diameter = 0;
  double global_bound = 0.0;
  double local_bound = 0.0;
  std::vector<double> edge_local_bounds;
  double timeout_window = 0.0;  // largest over edges
  std::size_t s_max = 0;
};

/// Throws ParameterError when sigma is undefined or not above 1.
StaticReport static_report(const Scenario& sc);
std::string format_static_report(const StaticReport& r);
nlohmann::json to_json(const StaticReport& r);

void write_trace_csv(std::ostream& out, const Trace& trace);
nlohmann::json summary_json(const Trace& trace, const std::string& scenario_hash, std::uint64_t seed);
nlohmann::json violations_json(const Trace& trace);

/// trace.csv, summary.json and violations.json under `dir` (created if needed).
void write_run_outputs(const std::filesystem::path& dir, const Trace& trace, const std::string& scenario_hash,
                       std::uint64_t seed);

/// %.17g
std::string format_double(double x);

}  // namespace gcs
