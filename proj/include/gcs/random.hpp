#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>

namespace gcs {

/// Deterministic 64-bit substream seed for (master_seed, label).
std::uint64_t stream_seed(std::uint64_t master_seed, const std::string& label);

/// Independent generator for (master_seed, label); no registry involved.
std::mt19937_64 seeded_stream(std::uint64_t master_seed, const std::string& label);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_draw(std::mt19937_64& rng);

/// Hands out one stream per label and rejects reuse within a run.
class StreamRegistry {
 public:
  explicit StreamRegistry(std::uint64_t master_seed) : seed_(master_seed) {}

  /// Throws ConfigError if `label` was already taken.
  std::mt19937_64 take(const std::string& label);
  [[nodiscard]] std::uint64_t master_seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::set<std::string> used_;
};

}  // namespace gcs
