#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "energylab/cutoff.hpp"
#include "energylab/graph.hpp"
#include "energylab/hyperbolic.hpp"
#include "energylab/rng.hpp"
#include "energylab/sde.hpp"

namespace elab {

// Full microscopic state: per-site fast phase (unit tangent bundle element)
// and log-energy.
struct MicroState {
  std::vector<Mat2> xi;
  std::vector<double> z;
  double time = 0.0;  // physical time
};

struct MicroConfig {
  const InteractionGraph* graph = nullptr;
  const HyperbolicSurface* surface = nullptr;
  const BumpPotential* potential = nullptr;
  double epsilon = 0.1;        // >= 0; at 0 the energies are exactly frozen
  double delta = 0.01;         // cutoff, in (0,1)
  std::vector<double> initial_energies;
  double h = 1e-3;             // integrator step, physical time
  double t_slow_end = 0.5;     // horizon in slow time; physical horizon eps^-2 * t
  double t_physical_end = 0.0; // if > 0, overrides the slow horizon (used at eps = 0)
  std::uint64_t seed = 0;
  int record_samples = 128;    // target number of recorded slow-time samples
  std::string rng_purpose = "micro";
  std::uint64_t rng_index = 0;
};

struct MicroRecord {
  TrajectoryRecord trajectory;   // energies e^{z_x} on the slow-time grid
  double hamiltonian_drift = 0.0;  // max relative drift of the conserved gauge
  double energy_drift = 0.0;       // max |e_x(t) - e_x(0)| (meaningful at eps = 0)
};

// Initial fast phases drawn from the product invariant volume.
MicroState micro_initial_state(const MicroConfig& config, RngStream& rng);

// Conserved gauge of the modified dynamics:
//   H = sum_x varphi(e^{z_x}) + eps * sum_edges phi_x phi_y V(q_x, q_y).
double micro_hamiltonian(const MicroConfig& config, const CutoffFamily& cutoff,
                         const MicroState& s);

// Classical 4th-order step of the full (xi, z) system in ambient matrix
// coordinates, followed by determinant renormalization and domain reduction.
void micro_rk4_step(const MicroConfig& config, const CutoffFamily& cutoff, MicroState& s,
                    double h);

MicroRecord micro_simulate(const MicroConfig& config);

}  // namespace elab
