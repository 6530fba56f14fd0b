#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "energylab/coeffs.hpp"
#include "energylab/graph.hpp"
#include "energylab/sde.hpp"
#include "energylab/stats.hpp"

namespace elab {

struct HypothesisReport {
  std::string name;
  double statistic = 0.0;
  double p_value = -1.0;  // -1 when the test is CI-based rather than p-valued
  bool pass = false;
  std::size_t n_samples = 0;
  double effective_samples = 0.0;
  std::uint64_t seed = 0;
  std::string details;
};

struct InvariantMarginalOptions {
  double beta = 1.0;
  std::size_t n_trajectories = 400;
  double t_end = 1.0;
  double dt = 1e-3;
  int samples_per_trajectory = 8;  // site-0 readings per trajectory, after t_end/2
  double alpha = 0.01;
  std::uint64_t seed = 0;
};

// Ensemble stationarity of the product Gamma(d/2, beta) law: initial
// energies drawn from it, evolved by the SDE, pooled single-site readings
// tested by KS with an effective sample size corrected for within-trajectory
// autocorrelation. Errors if fewer than 10^3 effective samples result.
HypothesisReport test_invariant_marginal(const CoefficientModel& model,
                                         const InteractionGraph& graph,
                                         const InvariantMarginalOptions& opt);

// Rejection rate of the same KS machinery on synthetic iid draws from the
// target (null calibration); should sit at the nominal level.
double calibrate_invariant_marginal_null(const CoefficientModel& model, double beta,
                                         std::size_t n_repeats, std::size_t n_per_test,
                                         double alpha, std::uint64_t seed);

// Smooth compactly-supported test functions of the energies: products of
// bumps of single energies. Catalog entries are defined by per-site
// (center, width) pairs; width <= 0 means the site is unused.
struct TestFunction {
  std::vector<double> center;
  std::vector<double> width;
};

double eval_test_function(const TestFunction& f, const std::vector<double>& E);

// Generator of the limiting process applied to a function of the energies:
// sum over undirected edges of a*(d/dEx - d/dEy) + beta^2 (d/dEx - d/dEy)^2,
// evaluated by central finite differences.
double apply_generator(const CoefficientModel& model, const InteractionGraph& graph,
                       const TestFunction& f, std::vector<double> E);

struct ReversibilityOptions {
  double beta = 1.0;
  std::size_t n_samples = 1000000;
  double tolerance_sigmas = 3.0;
  std::uint64_t seed = 0;
};

// E_beta(phi L h) = E_beta(h L phi) by Monte Carlo over the invariant
// product density.
HypothesisReport test_reversibility(const CoefficientModel& model,
                                    const InteractionGraph& graph, const TestFunction& phi,
                                    const TestFunction& h, const ReversibilityOptions& opt);

// Drift recomputed from the divergence-form generator
// (1/h0)(d/dEx - d/dEy)(h0 beta^2), h0 = (Ex Ey)^{d/2-1}, against the
// closed-form drift; returns the max relative deviation over the grid.
HypothesisReport test_drift_identity(const CoefficientModel& model,
                                     const std::vector<std::pair<double, double>>& grid,
                                     double tolerance = 1e-4);

struct HittingOptions {
  std::vector<double> delta_list;  // strictly decreasing thresholds
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t ensemble = 10000;
  std::uint64_t seed = 0;
};

struct HittingRow {
  double delta = 0.0;
  double p_hat = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  std::size_t hits = 0;
};

// P(tau_delta < T) for every delta in the list from one trajectory
// ensemble, via the running minimum (monotone in delta by construction).
std::vector<HittingRow> estimate_hitting_probability(const CoefficientModel& model,
                                                     const InteractionGraph& graph,
                                                     const std::vector<double>& initial,
                                                     const HittingOptions& opt);

// Completed downcrossings of [lo, hi] (hi > lo): transitions from above hi
// to below lo.
long count_downcrossings(const std::vector<double>& series, double hi, double lo);

struct CompareResult {
  std::vector<double> ks;  // per ladder entry, against the SDE sample
  bool decreasing = false;
  double noise_floor = 0.0;  // 95% two-sample KS critical distance
  bool pass = false;
};

// KS distances between per-site energy marginals of micro ensembles along a
// ladder of epsilon values and the matched SDE ensemble.
CompareResult compare_micro_sde(const std::vector<std::vector<double>>& micro_samples_by_eps,
                                const std::vector<double>& sde_samples);

}  // namespace elab
