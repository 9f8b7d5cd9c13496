#pragma once

#include "gcs/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace gcs {

/// Graph generators used by the scenario format. Every edge gets `params`.
NetworkGraph make_line(std::size_t n, double d_max, const EdgeParams& params);
NetworkGraph make_ring(std::size_t n, double d_max, const EdgeParams& params);
NetworkGraph make_grid(std::size_t rows, std::size_t cols, double d_max, const EdgeParams& params);
/// Node 0 is the hub, 1..n-1 the leaves.
NetworkGraph make_star(std::size_t n, double d_max, const EdgeParams& params);
/// Random spanning tree (node i attaches to a uniform earlier node) plus every other
/// pair with probability p. Connected by construction.
NetworkGraph make_random(std::size_t n, double p, std::uint64_t seed, double d_max, const EdgeParams& params);

struct LoadedScenario {
  Scenario scenario;  // prepared, not yet validated
  nlohmann::json document;
  std::string hash;   // hex FNV-1a of the canonical document
};

/// Parses scenario JSON text. `base_dir` resolves relative script files.
/// Throws ParseError on malformed JSON (with line and column) or a schema mismatch,
/// and ConfigError when a referenced file cannot be read.
LoadedScenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Builds a scenario from an already parsed document.
LoadedScenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");

LoadedScenario load_scenario(const std::filesystem::path& path);

/// Hex FNV-1a 64 of the compact, key-sorted dump.
std::string canonical_hash(const nlohmann::json& doc);

}  // namespace gcs
