#include "energylab/torus.hpp"

#include <cmath>
#include <stdexcept>

#include "energylab/stats.hpp"

namespace elab {

namespace {
double frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;
  return f;
}
}  // namespace

TorusPoint cat_map(const TorusPoint& p) {
  return {frac(2.0 * p[0] + p[1]), frac(p[0] + p[1])};
}

TorusPoint cat_map_iterate(TorusPoint p, long n) {
  for (long i = 0; i < n; ++i) p = cat_map(p);
  return p;
}

TorusPoint sample_torus_uniform(RngStream& rng) {
  return {rng.uniform(), rng.uniform()};
}

MapEnsembleResult slow_fast_map_simulate(const MapEnsembleConfig& config) {
  if (!config.coupling) throw std::invalid_argument("slow-fast map: coupling required");
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("slow-fast map: epsilon must be positive");
  if (!(config.t_end > 0.0)) throw std::invalid_argument("slow-fast map: t_end must be positive");
  if (config.ensemble == 0) throw std::invalid_argument("slow-fast map: empty ensemble");

  // Zero-mean hypothesis check on the fast invariant measure.
  MapEnsembleResult out;
  {
    RngStream rng(config.seed, "mapensemble-mean-check");
    std::vector<double> vals;
    vals.reserve(config.mean_check_samples);
    for (std::size_t i = 0; i < config.mean_check_samples; ++i)
      vals.push_back(config.coupling(sample_torus_uniform(rng), config.z0));
    auto ms = mean_stderr(vals);
    out.coupling_mean = ms.mean;
    out.coupling_mean_stderr = ms.stderr_;
    if (std::abs(ms.mean) > 4.0 * ms.stderr_ + 1e-12)
      throw std::runtime_error("slow-fast map: coupling mean differs from 0 beyond 4 standard errors");
  }

  long n_steps = static_cast<long>(std::ceil(config.t_end / (config.epsilon * config.epsilon)));
  long stride = std::max<long>(1, n_steps / static_cast<long>(config.max_samples));

  out.times.clear();
  for (long k = 0; k <= n_steps; k += stride)
    out.times.push_back(config.epsilon * config.epsilon * k);
  if ((n_steps % stride) != 0)
    out.times.push_back(config.epsilon * config.epsilon * n_steps);

  out.paths.resize(config.ensemble);
  for (std::size_t m = 0; m < config.ensemble; ++m) {
    RngStream rng(config.seed, "mapensemble-traj", m);
    TorusPoint x = sample_torus_uniform(rng);
    double z = config.z0;
    auto& path = out.paths[m];
    path.reserve(out.times.size());
    path.push_back(z);
    for (long k = 1; k <= n_steps; ++k) {
      z += config.epsilon * config.coupling(x, z);
      x = cat_map(x);
      if (k % stride == 0 || k == n_steps) path.push_back(z);
    }
  }
  return out;
}

}  // namespace elab
