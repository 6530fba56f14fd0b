#include <doctest.h>

#include <cmath>
#include <vector>

#include "energylab/cutoff.hpp"
#include "energylab/graph.hpp"
#include "energylab/hyperbolic.hpp"
#include "energylab/micro.hpp"

using namespace elab;

namespace {

struct Fixture {
  HyperbolicSurface surface;
  BumpPotential potential{surface, 1.0};
  InteractionGraph graph = build_complete_graph(2);

  MicroConfig base() const {
    MicroConfig c;
    c.graph = &graph;
    c.surface = &surface;
    c.potential = &potential;
    c.delta = 0.01;
    c.initial_energies = {1.0, 0.5};
    c.h = 1e-3;
    c.seed = 7;
    return c;
  }
};

// distance between unit tangent vectors up to the projective sign
double psl_dist(const Mat2& a, const Mat2& b) {
  double dp = 0.0, dm = 0.0;
  for (int i = 0; i < 4; ++i) {
    dp = std::max(dp, std::abs(a[i] - b[i]));
    dm = std::max(dm, std::abs(a[i] + b[i]));
  }
  return std::min(dp, dm);
}

}  // namespace

TEST_CASE("decoupled dynamics freezes the energies exactly") {
  Fixture f;
  auto cfg = f.base();
  cfg.epsilon = 0.0;
  cfg.t_physical_end = 50.0;
  cfg.record_samples = 16;
  auto rec = micro_simulate(cfg);
  CHECK(rec.energy_drift == doctest::Approx(0.0).epsilon(1e-15));
  for (const auto& row : rec.trajectory.energies) {
    CHECK(row[0] == 1.0);
    CHECK(row[1] == 0.5);
  }
}

TEST_CASE("decoupled dynamics requires an explicit physical horizon") {
  Fixture f;
  auto cfg = f.base();
  cfg.epsilon = 0.0;
  cfg.t_physical_end = 0.0;  // slow horizon is infinite physical time here
  CHECK_THROWS(micro_simulate(cfg));
}

TEST_CASE("conserved gauge drifts below tolerance for coupled runs") {
  Fixture f;
  auto cfg = f.base();
  cfg.epsilon = 0.2;
  cfg.t_slow_end = 0.02;  // physical horizon 0.5
  cfg.record_samples = 4;
  auto rec = micro_simulate(cfg);
  CHECK(rec.hamiltonian_drift <= 1e-8);
  for (const auto& row : rec.trajectory.energies)
    for (double e : row) CHECK(e > 0.0);
}

TEST_CASE("integrator steps are time-reversible up to scheme order") {
  Fixture f;
  auto cfg = f.base();
  cfg.epsilon = 0.15;
  CutoffFamily cutoff(cfg.delta);
  RngStream rng(cfg.seed, "test-reversal");
  MicroState s = micro_initial_state(cfg, rng);
  MicroState start = s;

  const double h = 1e-3;
  const int steps = 200;
  for (int k = 0; k < steps; ++k) micro_rk4_step(cfg, cutoff, s, h);
  // conjugate by the velocity reversal and integrate the same span forward
  for (auto& xi : s.xi) xi = theta_reverse(xi);
  for (int k = 0; k < steps; ++k) micro_rk4_step(cfg, cutoff, s, h);
  for (auto& xi : s.xi) xi = theta_reverse(xi);

  for (std::size_t x = 0; x < s.z.size(); ++x) {
    CHECK(s.z[x] == doctest::Approx(start.z[x]).epsilon(1e-8));
    CHECK(psl_dist(f.surface.reduce(s.xi[x]), f.surface.reduce(start.xi[x])) < 1e-6);
  }
}

TEST_CASE("gauge is invariant under fiber rotations of the state") {
  Fixture f;
  auto cfg = f.base();
  cfg.epsilon = 0.1;
  CutoffFamily cutoff(cfg.delta);
  RngStream rng(cfg.seed, "test-gauge");
  MicroState s = micro_initial_state(cfg, rng);
  double h0 = micro_hamiltonian(cfg, cutoff, s);
  MicroState r = s;
  for (auto& xi : r.xi) xi = rotate_tangent(xi, 1.3);
  CHECK(micro_hamiltonian(cfg, cutoff, r) == doctest::Approx(h0).epsilon(1e-12));
}

TEST_CASE("runs are reproducible and stream-keyed") {
  Fixture f;
  auto cfg = f.base();
  cfg.epsilon = 0.2;
  cfg.t_slow_end = 0.1;
  cfg.record_samples = 2;
  auto a = micro_simulate(cfg);
  auto b = micro_simulate(cfg);
  CHECK(a.trajectory.energies.back()[0] == b.trajectory.energies.back()[0]);
  cfg.rng_index = 1;
  auto c = micro_simulate(cfg);
  CHECK(c.trajectory.energies.back()[0] != a.trajectory.energies.back()[0]);
}

TEST_CASE("config validation") {
  Fixture f;
  auto cfg = f.base();
  cfg.delta = 1.5;
  CHECK_THROWS(micro_simulate(cfg));
  cfg = f.base();
  cfg.epsilon = -0.1;
  CHECK_THROWS(micro_simulate(cfg));
  cfg = f.base();
  cfg.initial_energies = {1.0};
  CHECK_THROWS(micro_simulate(cfg));
  cfg = f.base();
  cfg.initial_energies = {1.0, -0.5};
  CHECK_THROWS(micro_simulate(cfg));
}
