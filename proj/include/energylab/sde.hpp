#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "energylab/coeffs.hpp"
#include "energylab/cutoff.hpp"
#include "energylab/graph.hpp"
#include "energylab/rng.hpp"

namespace elab {

struct EnergyState {
  std::vector<double> energies;  // all > 0
  double time = 0.0;
};

struct SdeRunConfig {
  const InteractionGraph* graph = nullptr;
  const CoefficientModel* model = nullptr;
  std::vector<double> initial_energies;
  double dt = 0.0;          // base step; 0 -> heuristic 1e-4 (mean E)^{3/2} / A
  double t_end = 1.0;
  double delta_stop = 0.0;  // tau_delta threshold; 0 disables stopping
  std::uint64_t seed = 0;
  int max_halvings = 40;
  int record_stride = 1;    // in base steps
  std::string rng_purpose = "sde";
  std::uint64_t rng_index = 0;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> energies;  // [sample][vertex]
  bool stopped = false;      // hit delta_stop before t_end
  double stop_time = 0.0;
  std::uint64_t seed = 0;
  std::string config_digest;
  // running minimum over time of min_x E_x, useful for hitting statistics
  double min_energy_seen = 0.0;
};

// One N(0, dt) increment per undirected edge; the oriented increment for
// (x,y) with x < y is the stored value, the reverse orientation is its
// negation.
std::vector<double> sample_edge_noise(const InteractionGraph& g, double dt, RngStream& rng);

// One Euler-Maruyama step. Drift and noise are applied once per undirected
// edge with opposite signs at the two endpoints, so the total energy change
// is exactly zero in floating point. Returns nullopt if any updated energy
// would be <= 0 (caller refines the step).
std::optional<EnergyState> em_step(const EnergyState& state, const InteractionGraph& g,
                                   const CoefficientModel& model, double dt,
                                   const std::vector<double>& edge_noise);

// Integrate the energy-coordinate SDE, refining rejected steps by Brownian
// bridge splitting; stops at t_end or when min energy <= delta_stop.
TrajectoryRecord simulate(const SdeRunConfig& config);

// Log-coordinate integrator with the explicit low-energy cutoff delta;
// coefficients from the cutoff-modified formulas. No positivity rejection is
// needed in z-space.
TrajectoryRecord simulate_log_coords(const SdeRunConfig& config, const CutoffFamily& cutoff);

// Per-edge coefficients of the log-coordinate equation, exposed for tests.
double log_edge_beta(const CoefficientModel& model, const CutoffFamily& cutoff, double zx,
                     double zy);
double log_drift_site(const CoefficientModel& model, const CutoffFamily& cutoff,
                      const InteractionGraph& g, const std::vector<double>& z, std::size_t x);

}  // namespace elab
