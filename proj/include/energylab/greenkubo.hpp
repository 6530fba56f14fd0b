#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "energylab/coeffs.hpp"
#include "energylab/hyperbolic.hpp"
#include "energylab/stats.hpp"
#include "energylab/torus.hpp"

namespace elab {

struct CorrelationEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double window = 0.0;     // time (or lag) truncation actually used
  double tail = 0.0;       // extrapolated tail beyond the window
  std::size_t ensemble = 0;
};

struct RhoOptions {
  double dt = 0.02;               // grid step of the unit-speed curves
  std::size_t max_points = 1200;  // hard cap on the curve window length
  std::size_t ensemble = 20000;
  std::uint64_t seed = 0;
  std::string rng_purpose = "greenkubo";
  // Window rule: first s where |C| < noise_mult * SE for noise_run points,
  // not applied before min_window (guards against slow zero crossings).
  double noise_mult = 3.0;
  int noise_run = 5;
  double min_window = 6.0;
  std::size_t blocks = 32;  // block count for standard errors
};

// Sampled two-point function C(t) = E(L1V(g^{at} xi, g^{bt} eta) L1V(xi, eta))
// on the given uniform grid (t_grid[j] = j * step).
std::vector<MeanStderr> estimate_pair_correlation(const HyperbolicSurface& surface,
                                                  const BumpPotential& potential, double a,
                                                  double b, double step, std::size_t n_points,
                                                  std::size_t ensemble, std::uint64_t seed,
                                                  const std::string& rng_purpose = "paircorr");

// Because the two fast phases are drawn independently, the correlation
// factorizes exactly:
//   C(t) = Cd(a t) * Cu(b t),   Cd(s) = E(du(g^s xi) du(xi)),
//                               Cu(s) = E(u(g^s eta) u(eta)),
// where du is the derivative of the site factor along the flow. The tables
// hold both unit-speed curves on a common grid, windowed adaptively, split
// into member blocks for standard errors. Estimating the two 1-d curves
// once and integrating their product is unbiased for every speed pair and
// avoids the cancellation noise of the direct pair estimator at extreme
// speed ratios: the non-decaying mean part of Cu multiplies the integral of
// Cd, which vanishes over the full line and is resolved here explicitly.
struct FlowCorrelationTables {
  double ds = 0.0;        // grid step
  double window = 0.0;    // adaptive truncation S of the unit-speed curves
  std::size_t ensemble = 0;
  // Pooled curves on [0, window] plus their standard errors.
  std::vector<double> cd, cu_centered;
  std::vector<double> cd_se, cu_se;
  double eu2 = 0.0;  // squared mean of the site factor (plateau of Cu)
  // Per-block curves for error propagation through derived integrals.
  std::vector<std::vector<double>> cd_block, cuc_block;
  std::vector<double> eu2_block;
};

FlowCorrelationTables build_flow_tables(const HyperbolicSurface& surface,
                                        const BumpPotential& potential,
                                        const RhoOptions& opt);

// rho(a,b) = integral of C over the whole line = 2 * integral over [0,inf),
// evaluated by quadrature of the factorized correlation.
CorrelationEstimate rho_from_tables(const FlowCorrelationTables& tables, double a, double b);

CorrelationEstimate estimate_rho(const HyperbolicSurface& surface,
                                 const BumpPotential& potential, double a, double b,
                                 const RhoOptions& opt);

// Direct pair estimator: 2 * trapezoid of the sampled pair correlation with
// the adaptive window rule and an exponential tail correction. Reliable at
// moderate speed ratios; used to cross-validate the factorized estimator.
CorrelationEstimate estimate_rho_direct(const HyperbolicSurface& surface,
                                        const BumpPotential& potential, double a, double b,
                                        const RhoOptions& opt);

struct GammaCurveResult {
  GammaTable table;           // tau, gamma, stderr
  double fitted_A = 0.0;      // constant fit of (1+tau^3) Gamma(tau) on the tail
  double fit_residual = 0.0;  // relative rms residual of that fit
};

// Empirical Gamma(tau) = rho(tau, 1), all points evaluated from one set of
// flow tables (common random numbers across the curve). The tail fit uses
// the grid points with tau >= tail_min_tau (top quarter if fewer than two).
GammaCurveResult gamma_curve_from_tables(const FlowCorrelationTables& tables,
                                         const std::vector<double>& tau_grid,
                                         double tail_min_tau = 8.0);

GammaCurveResult estimate_gamma_curve(const HyperbolicSurface& surface,
                                      const BumpPotential& potential,
                                      const std::vector<double>& tau_grid,
                                      const RhoOptions& opt, double tail_min_tau = 8.0);

struct SigmaOptions {
  int lag_max = 64;
  std::size_t ensemble = 20000;
  std::uint64_t seed = 0;
  std::string rng_purpose = "sigma";
  double noise_mult = 2.0;
  int noise_run = 3;
};

// Two-sided lag sum sigma^2 = sum_n cov(A o f^n, A) for the cat-map
// testbed; observable must be zero-mean (checked by Monte Carlo).
CorrelationEstimate estimate_sigma_sq_map(const std::function<double(const TorusPoint&)>& A,
                                          const SigmaOptions& opt);

// Independent oracle: Var(sum_{n<N} A o f^n) / N over an ensemble of
// uniformly seeded orbits.
MeanStderr birkhoff_variance_oracle(const std::function<double(const TorusPoint&)>& A,
                                    long N, std::size_t ensemble, std::uint64_t seed);

}  // namespace elab
