#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "energylab/rng.hpp"

namespace elab {

// Point of the 2-torus, coordinates in [0,1).
using TorusPoint = std::array<double, 2>;

// Hyperbolic toral automorphism (2,1;1,1).
TorusPoint cat_map(const TorusPoint& p);

TorusPoint cat_map_iterate(TorusPoint p, long n);

TorusPoint sample_torus_uniform(RngStream& rng);

// Slow-fast skew product of the map testbed:
//   F_eps(x, z) = (f(x), z + eps * A(x, z)),
// iterated ceil(t_end / eps^2) times; returns the slow paths on the rescaled
// grid t_k = eps^2 * k (subsampled to at most max_samples points).
struct MapEnsembleConfig {
  std::function<double(const TorusPoint&, double)> coupling;  // A(x, z)
  double epsilon = 0.1;
  double t_end = 1.0;
  double z0 = 0.0;
  std::size_t ensemble = 100;
  std::uint64_t seed = 0;
  std::size_t max_samples = 256;  // per path
  // Monte Carlo check that the coupling has zero mean under the invariant
  // (Lebesgue) measure; simulation refuses to run if the CI excludes 0.
  std::size_t mean_check_samples = 100000;
};

struct MapEnsembleResult {
  std::vector<double> times;                   // rescaled slow times
  std::vector<std::vector<double>> paths;      // [member][sample]
  double coupling_mean = 0.0;                  // from the setup check
  double coupling_mean_stderr = 0.0;
};

MapEnsembleResult slow_fast_map_simulate(const MapEnsembleConfig& config);

}  // namespace elab
