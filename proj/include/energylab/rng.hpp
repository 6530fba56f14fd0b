#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace elab {

// 64-bit FNV-1a, used for stream derivation and config digests.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// All randomness in the project flows from one root seed. Child streams are
// keyed by (purpose string, index) so that results do not depend on the
// order in which trajectories are scheduled.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::string_view purpose, std::uint64_t index = 0) {
    std::uint64_t key = splitmix64(root_seed ^ splitmix64(fnv1a(purpose) + index));
    engine_.seed(key);
  }

  double gaussian(double mean = 0.0, double stddev = 1.0) {
    return mean + stddev * normal_(engine_);
  }

  double uniform() { return unif_(engine_); }  // [0,1)

  std::uint64_t bits() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace elab
