#include "gcs/random.hpp"

#include "gcs/errors.hpp"

namespace gcs {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master_seed, const std::string& label) {
  return splitmix64(splitmix64(master_seed) ^ fnv1a(label));
}

std::mt19937_64 seeded_stream(std::uint64_t master_seed, const std::string& label) {
  return std::mt19937_64(stream_seed(master_seed, label));
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 StreamRegistry::take(const std::string& label) {
  if (!used_.insert(label).second) throw ConfigError("random stream label reused: " + label);
  return seeded_stream(seed_, label);
}

}  // namespace gcs
