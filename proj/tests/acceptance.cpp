// Acceptance gate: one line per criterion, nonzero exit iff any criterion
// fails. The slow micro-vs-SDE ladder comparison (criterion 9) lives in the
// companion slow binary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "energylab/greenkubo.hpp"
#include "energylab/hyperbolic.hpp"
#include "energylab/runner.hpp"

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int index, const std::string& label, const std::function<Outcome()>& fn) {
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  if (!out.pass) ++g_failures;
  std::printf("criterion %2d %-34s %s%s%s\n", index, label.c_str(), out.pass ? "PASS" : "FAIL",
              out.detail.empty() ? "" : "  -- ", out.detail.c_str());
  std::fflush(stdout);
}

Outcome from_check(const elab::json& res, const std::string& detail) {
  return {res.value("pass", false), detail};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

Outcome criterion_gamma_curve() {
  using namespace elab;
  HyperbolicSurface surface;
  BumpPotential potential(surface, 1.0);

  RhoOptions opt;
  opt.seed = 42;
  opt.ensemble = 200000;
  opt.dt = 0.02;
  opt.max_points = 1200;
  opt.min_window = 6.0;
  auto tables = build_flow_tables(surface, potential, opt);

  const std::vector<double> grid = {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4,
                                    1.0 / 2,  1.0,      8.0,      16.0,    32.0,
                                    64.0};
  auto curve = gamma_curve_from_tables(tables, grid, 8.0);

  bool positive = true;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (!(curve.table.gamma[k] - 2.0 * curve.table.stderr_[k] > 0.0)) positive = false;

  bool tail_ok = curve.fit_residual < 0.20;

  // homogeneity: 2 rho(2,4) against an independent direct estimate of
  // rho(1,2), within two joint standard errors
  auto scaled = rho_from_tables(tables, 2.0, 4.0);
  RhoOptions dopt;
  dopt.seed = 77;
  dopt.ensemble = 20000;
  dopt.dt = 0.05;
  dopt.max_points = 4000;
  dopt.min_window = 1.0;
  auto direct = estimate_rho_direct(surface, potential, 1.0, 2.0, dopt);
  double lhs = 2.0 * scaled.value;
  double joint = std::sqrt(4.0 * scaled.stderr_ * scaled.stderr_ +
                           direct.stderr_ * direct.stderr_);
  bool homog_ok = std::abs(lhs - direct.value) <= 2.0 * joint;

  std::ostringstream os;
  os << "min_z=";
  double min_z = 1e300;
  for (std::size_t k = 0; k < grid.size(); ++k)
    min_z = std::min(min_z, curve.table.gamma[k] / curve.table.stderr_[k]);
  os << fmt(min_z) << " tail_residual=" << fmt(curve.fit_residual)
     << " A=" << fmt(curve.fitted_A) << " homog_dev_se=" << fmt(std::abs(lhs - direct.value) / joint);
  return {positive && tail_ok && homog_ok, os.str()};
}

}  // namespace

int main() {
  using elab::runner::check_coefficient_identities;
  using elab::runner::check_conservation;
  using elab::runner::check_drift_identity;
  using elab::runner::check_hitting_trend;
  using elab::runner::check_invariant_marginal;
  using elab::runner::check_micro_gauges;
  using elab::runner::check_reversibility;
  using elab::runner::check_sigma_consistency;

  report(1, "coefficient-identities", [] {
    auto r = check_coefficient_identities(kSeed);
    double worst = std::max({r.value("homogeneity_max_rel", 1.0), r.value("euler_max_rel", 1.0),
                             r.value("beta_sq_symmetry_max_rel", 1.0),
                             r.value("drift_antisymmetry_max_rel", 1.0)});
    return from_check(r, "max_identity_dev=" + fmt(worst) +
                             " ineq_min_gap=" + fmt(r.value("inequality_min_gap", 0.0)));
  });

  report(2, "energy-conservation", [] {
    auto r = check_conservation(kSeed);
    return from_check(r, "worst_rel=" + fmt(r.value("max_total_drift_rel", 1.0)));
  });

  report(3, "drift-divergence-identity", [] {
    auto r = check_drift_identity();
    return from_check(r, "max_rel_dev=" + fmt(r.value("max_rel_error", 1.0)));
  });

  report(4, "invariant-marginal", [] {
    auto r = check_invariant_marginal(kSeed, true);
    return from_check(r, "p=" + fmt(r.value("p_value", -1.0)) +
                             " n_eff=" + fmt(r.value("effective_samples", 0.0)) +
                             " cal_rate=" + fmt(r.value("calibration_rejection_rate", -1.0)));
  });

  report(5, "generator-reversibility", [] {
    auto r = check_reversibility(kSeed, 1000000);
    double worst = 0.0;
    for (const auto& e : r["pairs"]) worst = std::max(worst, std::abs(e["sigmas"].get<double>()));
    return from_check(r, "worst_sigmas=" + fmt(worst));
  });

  report(6, "hitting-probability-trend", [] {
    auto r = check_hitting_trend(kSeed, 10000);
    std::ostringstream os;
    os << "p_hat=";
    for (const auto& e : r["table"]) os << fmt(e["p_hat"].get<double>()) << " ";
    return from_check(r, os.str());
  });

  report(7, "map-transport-consistency", [] {
    auto r = check_sigma_consistency(kSeed);
    return from_check(r, "rel_dev=" + fmt(r.value("rel_deviation", 0.0)) +
                             " coboundary=" + fmt(r.value("coboundary_sigma_sq", 0.0)));
  });

  report(8, "flow-correlation-curve", criterion_gamma_curve);

  report(10, "micro-integrator-gauges", [] {
    auto r = check_micro_gauges(kSeed);
    return from_check(r, "eps0_drift=" + fmt(r.value("eps0_energy_drift", 1.0)) +
                             " gauge_drift=" + fmt(r.value("hamiltonian_drift_rel", 1.0)));
  });

  if (g_failures > 0) {
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
