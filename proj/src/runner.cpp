#include "energylab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "energylab/coeffs.hpp"
#include "energylab/cutoff.hpp"
#include "energylab/graph.hpp"
#include "energylab/greenkubo.hpp"
#include "energylab/micro.hpp"
#include "energylab/sde.hpp"
#include "energylab/stats.hpp"
#include "energylab/torus.hpp"
#include "energylab/verify.hpp"

namespace elab::runner {

namespace {

const HyperbolicSurface& shared_surface() {
  static HyperbolicSurface s;
  return s;
}

InteractionGraph parse_graph(const json& j) {
  reject_unknown_keys(j, {"type", "n", "dim", "box", "edges"}, "graph");
  std::string type = j.at("type").get<std::string>();
  if (type == "complete") return build_complete_graph(j.at("n").get<int>());
  if (type == "lattice") {
    int dim = j.at("dim").get<int>();
    std::vector<AxisRange> box;
    for (const auto& r : j.at("box")) box.push_back({r.at(0).get<long>(), r.at(1).get<long>()});
    return build_lattice_region(dim, box);
  }
  if (type == "edges") {
    std::vector<std::array<int, 2>> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return build_from_edges(j.at("n").get<std::size_t>(), std::move(edges));
  }
  throw std::runtime_error("graph: unknown type '" + type + "'");
}

CoefficientModel parse_model(const json& j) {
  reject_unknown_keys(j, {"type", "A", "d", "gamma_csv"}, "model");
  std::string type = j.value("type", "analytic");
  int d = j.value("d", 3);
  if (type == "analytic") return CoefficientModel::analytic(j.value("A", 1.0), d);
  if (type == "empirical")
    return CoefficientModel::empirical_from_csv(j.at("gamma_csv").get<std::string>(), d);
  throw std::runtime_error("model: unknown type '" + type + "'");
}

std::vector<double> parse_energies(const json& j) {
  std::vector<double> e = j.get<std::vector<double>>();
  for (double v : e)
    if (!(v > 0.0)) throw std::runtime_error("initial_energies: all entries must be > 0");
  return e;
}

std::uint64_t require_seed(const json& config) {
  if (!config.contains("seed")) throw std::runtime_error("config: 'seed' is required");
  return config.at("seed").get<std::uint64_t>();
}

void ensure_dir(const std::string& outdir) {
  if (!outdir.empty()) std::filesystem::create_directories(outdir);
}

json trajectory_report(const TrajectoryRecord& rec, const json& config) {
  json r;
  r["seed"] = rec.seed;
  r["config_digest"] = config_digest(config);
  r["n_samples"] = rec.times.size();
  r["t_final"] = rec.times.empty() ? 0.0 : rec.times.back();
  r["stopped"] = rec.stopped;
  r["stop_time"] = rec.stop_time;
  r["min_energy_seen"] = rec.min_energy_seen;
  return r;
}

}  // namespace

json simulate_sde(const json& config, const std::string& outdir) {
  reject_unknown_keys(config,
                      {"seed", "graph", "model", "initial_energies", "dt", "t_end",
                       "delta_stop", "record_stride", "coords", "delta"},
                      "simulate-sde");
  auto graph = parse_graph(config.at("graph"));
  auto model = parse_model(config.at("model"));
  SdeRunConfig cfg;
  cfg.graph = &graph;
  cfg.model = &model;
  cfg.initial_energies = parse_energies(config.at("initial_energies"));
  cfg.dt = config.value("dt", 0.0);
  cfg.t_end = config.value("t_end", 1.0);
  cfg.delta_stop = config.value("delta_stop", 0.0);
  cfg.record_stride = config.value("record_stride", 1);
  cfg.seed = require_seed(config);
  if (cfg.delta_stop < 0.0) throw std::runtime_error("delta_stop: must be >= 0");

  std::string coords = config.value("coords", "energy");
  TrajectoryRecord rec;
  if (coords == "energy") {
    rec = simulate(cfg);
  } else if (coords == "log") {
    double delta = config.value("delta", 0.01);
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::runtime_error("delta: must be in (0,1)");
    CutoffFamily cutoff(delta);
    rec = simulate_log_coords(cfg, cutoff);
  } else {
    throw std::runtime_error("coords: must be 'energy' or 'log'");
  }
  rec.config_digest = config_digest(config);

  json report = trajectory_report(rec, config);
  if (!outdir.empty()) {
    ensure_dir(outdir);
    write_trajectory_csv(outdir + "/trajectory.csv", rec);
    report["trajectory_csv"] = outdir + "/trajectory.csv";
    write_json_file(outdir + "/report.json", report);
  }
  return report;
}

json simulate_micro(const json& config, const std::string& outdir) {
  reject_unknown_keys(config,
                      {"seed", "graph", "epsilon", "delta", "initial_energies", "h",
                       "t_slow_end", "t_physical_end", "record_samples", "potential_radius"},
                      "simulate-micro");
  auto graph = parse_graph(config.at("graph"));
  const HyperbolicSurface& surface = shared_surface();
  BumpPotential potential(surface, config.value("potential_radius", 1.0));

  MicroConfig cfg;
  cfg.graph = &graph;
  cfg.surface = &surface;
  cfg.potential = &potential;
  cfg.epsilon = config.at("epsilon").get<double>();
  cfg.delta = config.at("delta").get<double>();
  cfg.initial_energies = parse_energies(config.at("initial_energies"));
  cfg.h = config.value("h", 1e-3);
  cfg.t_slow_end = config.value("t_slow_end", 0.5);
  cfg.t_physical_end = config.value("t_physical_end", 0.0);
  cfg.record_samples = config.value("record_samples", 128);
  cfg.seed = require_seed(config);
  if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0)) throw std::runtime_error("delta: must be in (0,1)");
  if (cfg.epsilon < 0.0) throw std::runtime_error("epsilon: must be >= 0");

  auto rec = micro_simulate(cfg);
  rec.trajectory.config_digest = config_digest(config);

  json report = trajectory_report(rec.trajectory, config);
  report["hamiltonian_drift"] = rec.hamiltonian_drift;
  report["energy_drift"] = rec.energy_drift;
  if (!outdir.empty()) {
    ensure_dir(outdir);
    write_trajectory_csv(outdir + "/trajectory.csv", rec.trajectory);
    report["trajectory_csv"] = outdir + "/trajectory.csv";
    write_json_file(outdir + "/report.json", report);
  }
  return report;
}

json estimate_gamma(const json& config, const std::string& outdir) {
  reject_unknown_keys(config,
                      {"seed", "tau_grid", "dt", "ensemble", "max_points", "min_window",
                       "potential_radius"},
                      "estimate-gamma");
  const HyperbolicSurface& surface = shared_surface();
  BumpPotential potential(surface, config.value("potential_radius", 1.0));

  RhoOptions opt;
  opt.seed = require_seed(config);
  opt.dt = config.value("dt", 0.02);
  opt.ensemble = config.value("ensemble", std::size_t{20000});
  opt.max_points = config.value("max_points", std::size_t{1200});
  opt.min_window = config.value("min_window", 6.0);
  std::vector<double> tau_grid = config.at("tau_grid").get<std::vector<double>>();

  auto res = estimate_gamma_curve(surface, potential, tau_grid, opt);

  json report;
  report["seed"] = opt.seed;
  report["config_digest"] = config_digest(config);
  report["fitted_A"] = res.fitted_A;
  report["fit_residual"] = res.fit_residual;
  report["tau"] = res.table.tau;
  report["gamma"] = res.table.gamma;
  report["stderr"] = res.table.stderr_;
  if (!outdir.empty()) {
    ensure_dir(outdir);
    std::string note = "seed=" + std::to_string(opt.seed) +
                       " config_digest=" + config_digest(config).c_str();
    save_gamma_csv(outdir + "/gamma.csv", res.table, note);
    report["gamma_csv"] = outdir + "/gamma.csv";
    write_json_file(outdir + "/report.json", report);
  }
  return report;
}

namespace {

std::function<double(const TorusPoint&)> named_observable(const std::string& name) {
  if (name == "cos1")
    return [](const TorusPoint& p) { return std::cos(2.0 * M_PI * p[0]); };
  if (name == "coboundary") {
    // g o f - g with g = cos(2 pi u1); exactly zero-sum along orbits
    return [](const TorusPoint& p) {
      double fu = 2.0 * p[0] + p[1];
      return std::cos(2.0 * M_PI * fu) - std::cos(2.0 * M_PI * p[0]);
    };
  }
  throw std::runtime_error("observable: unknown name '" + name + "'");
}

}  // namespace

json estimate_sigma(const json& config, const std::string& outdir) {
  reject_unknown_keys(config,
                      {"seed", "observable", "lag_max", "ensemble", "oracle_N",
                       "oracle_ensemble"},
                      "estimate-sigma");
  SigmaOptions opt;
  opt.seed = require_seed(config);
  opt.lag_max = config.value("lag_max", 64);
  opt.ensemble = config.value("ensemble", std::size_t{20000});
  std::string obs_name = config.value("observable", "cos1");
  auto A = named_observable(obs_name);

  auto est = estimate_sigma_sq_map(A, opt);
  json report;
  report["seed"] = opt.seed;
  report["config_digest"] = config_digest(config);
  report["observable"] = obs_name;
  report["sigma_sq"] = est.value;
  report["stderr"] = est.stderr_;
  report["lag_window"] = est.window;
  report["ensemble"] = est.ensemble;

  long oracle_N = config.value("oracle_N", 0L);
  if (oracle_N > 0) {
    std::size_t oe = config.value("oracle_ensemble", std::size_t{500});
    auto oracle = birkhoff_variance_oracle(A, oracle_N, oe, opt.seed + 1);
    report["oracle_sigma_sq"] = oracle.mean;
    report["oracle_stderr"] = oracle.stderr_;
  }
  if (!outdir.empty()) {
    ensure_dir(outdir);
    write_json_file(outdir + "/report.json", report);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Verification checks
// ---------------------------------------------------------------------------

json check_coefficient_identities(std::uint64_t seed) {
  (void)seed;  // deterministic
  auto model = CoefficientModel::analytic(1.0, 3);
  json r;
  r["name"] = "coefficient-identities";

  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(0.2 * std::pow(25.0, i / 19.0));

  double worst_hom = 0.0;
  for (double lambda : {0.5, 2.0, 7.0})
    for (double a : grid)
      for (double b : grid) {
        double lhs = lambda * model.rho(lambda * a, lambda * b);
        double rhs = model.rho(a, b);
        worst_hom = std::max(worst_hom, std::abs(lhs - rhs) / std::abs(rhs));
      }
  r["homogeneity_max_rel"] = worst_hom;

  double worst_euler = 0.0;
  const double h = 1e-4;
  for (double a : grid)
    for (double b : grid) {
      double da = (model.rho(a * std::exp(h), b) - model.rho(a * std::exp(-h), b)) / (2.0 * h);
      double db = (model.rho(a, b * std::exp(h)) - model.rho(a, b * std::exp(-h))) / (2.0 * h);
      // a d_a rho + b d_b rho = -rho  (log-derivative form)
      double resid = da + db + model.rho(a, b);
      worst_euler = std::max(worst_euler, std::abs(resid) / std::abs(model.rho(a, b)));
    }
  r["euler_max_rel"] = worst_euler;

  double worst_sym = 0.0, worst_anti = 0.0;
  for (double Ex : grid)
    for (double Ey : grid) {
      double bs = model.beta_sq(Ex, Ey), bs2 = model.beta_sq(Ey, Ex);
      worst_sym = std::max(worst_sym, std::abs(bs - bs2) / std::abs(bs));
      double dr = model.drift(Ex, Ey), dr2 = model.drift(Ey, Ex);
      // Normalize by the natural drift magnitude beta^2 / E so that the
      // rounding residue of the exact zero on the diagonal is not divided
      // by itself.
      double scale = std::max({std::abs(dr), std::abs(dr2), bs / std::min(Ex, Ey)});
      worst_anti = std::max(worst_anti, std::abs(dr + dr2) / scale);
    }
  r["beta_sq_symmetry_max_rel"] = worst_sym;
  r["drift_antisymmetry_max_rel"] = worst_anti;

  std::vector<std::pair<double, double>> pairs;
  for (double Ex : grid)
    for (double Ey : grid)
      if (Ey > 2.0 * Ex) pairs.emplace_back(Ex, Ey);
  auto ineq = model.check_drift_inequality(2.0, pairs);
  r["inequality_min_gap"] = ineq.min_gap;
  r["inequality_checked"] = ineq.n_checked;

  r["pass"] = worst_hom <= 1e-12 && worst_euler <= 1e-4 && worst_sym <= 1e-12 &&
              worst_anti <= 1e-12 && ineq.pass;
  return r;
}

json check_conservation(std::uint64_t seed) {
  json r;
  r["name"] = "exact-conservation";
  double worst = 0.0;
  auto model = CoefficientModel::analytic(1.0, 3);
  auto run_one = [&](const InteractionGraph& g, std::vector<double> e0, std::uint64_t idx) {
    SdeRunConfig cfg;
    cfg.graph = &g;
    cfg.model = &model;
    cfg.initial_energies = std::move(e0);
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.seed = seed;
    cfg.rng_index = idx;
    cfg.record_stride = 5;
    auto rec = simulate(cfg);
    double total0 = 0.0;
    for (double v : rec.energies.front()) total0 += v;
    for (const auto& row : rec.energies) {
      double t = 0.0;
      for (double v : row) t += v;
      worst = std::max(worst, std::abs(t - total0) / total0);
    }
  };
  auto g1 = build_complete_graph(4);
  run_one(g1, {1.0, 0.5, 2.0, 0.25}, 0);
  auto g2 = build_lattice_region(1, {{0, 4}});
  run_one(g2, {1.0, 1.5, 0.7, 2.0, 0.9}, 1);
  r["max_total_drift_rel"] = worst;
  r["pass"] = worst <= 1e-12;
  return r;
}

json check_drift_identity() {
  auto model = CoefficientModel::analytic(1.0, 3);
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      grid.emplace_back(0.1 * std::pow(100.0, i / 29.0), 0.1 * std::pow(100.0, j / 29.0));
  auto rep = test_drift_identity(model, grid, 1e-4);
  json r;
  r["name"] = rep.name;
  r["max_rel_error"] = rep.statistic;
  r["details"] = rep.details;
  r["pass"] = rep.pass;
  return r;
}

json check_invariant_marginal(std::uint64_t seed, bool with_calibration) {
  auto model = CoefficientModel::analytic(1.0, 3);
  auto graph = build_complete_graph(2);
  InvariantMarginalOptions opt;
  opt.beta = 1.0;
  opt.n_trajectories = 1500;
  opt.t_end = 1.0;
  opt.dt = 1e-3;
  opt.samples_per_trajectory = 8;
  opt.alpha = 0.01;
  opt.seed = seed;
  auto rep = test_invariant_marginal(model, graph, opt);
  json r;
  r["name"] = rep.name;
  r["ks_statistic"] = rep.statistic;
  r["p_value"] = rep.p_value;
  r["effective_samples"] = rep.effective_samples;
  r["details"] = rep.details;
  bool pass = rep.pass;
  if (with_calibration) {
    double rate = calibrate_invariant_marginal_null(model, 1.0, 1000, 500, 0.01, seed + 1);
    r["calibration_rejection_rate"] = rate;
    bool cal_ok = rate <= 0.03;  // nominal 1% within +-2%
    r["calibration_pass"] = cal_ok;
    pass = pass && cal_ok;
  }
  r["pass"] = pass;
  return r;
}

json check_reversibility(std::uint64_t seed, std::size_t n_samples) {
  auto model = CoefficientModel::analytic(1.0, 3);
  auto graph = build_complete_graph(2);
  // Catalog: products of bumps of single energies on the two sites.
  std::vector<std::pair<TestFunction, TestFunction>> catalog = {
      {{{1.0, 0.0}, {0.8, 0.0}}, {{0.0, 1.5}, {0.0, 1.0}}},
      {{{1.0, 1.0}, {0.8, 0.8}}, {{2.0, 0.0}, {1.0, 0.0}}},
      {{{0.8, 0.0}, {0.5, 0.0}}, {{1.2, 0.0}, {0.7, 0.0}}},
      {{{0.0, 1.0}, {0.0, 0.9}}, {{1.0, 0.0}, {0.9, 0.0}}},
      {{{1.5, 0.7}, {1.2, 0.5}}, {{0.0, 1.2}, {0.0, 0.8}}},
  };
  json r;
  r["name"] = "reversibility";
  json entries = json::array();
  bool all = true;
  std::uint64_t k = 0;
  for (const auto& [phi, hf] : catalog) {
    ReversibilityOptions opt;
    opt.beta = 1.0;
    opt.n_samples = n_samples;
    opt.seed = seed + (k++);
    auto rep = test_reversibility(model, graph, phi, hf, opt);
    json e;
    e["sigmas"] = rep.statistic;
    e["details"] = rep.details;
    e["pass"] = rep.pass;
    entries.push_back(e);
    all = all && rep.pass;
  }
  r["pairs"] = entries;
  r["pass"] = all;
  return r;
}

json check_hitting_trend(std::uint64_t seed, std::size_t ensemble) {
  auto model = CoefficientModel::analytic(1.0, 3);
  auto graph = build_complete_graph(2);
  HittingOptions opt;
  opt.delta_list = {1e-1, 1e-2, 1e-3, 1e-4};
  opt.t_end = 1.0;
  opt.dt = 1e-3;
  opt.ensemble = ensemble;
  opt.seed = seed;
  auto rows = estimate_hitting_probability(model, graph, {1.0, 1.0}, opt);
  json r;
  r["name"] = "hitting-trend";
  json table = json::array();
  for (const auto& row : rows) {
    json e;
    e["delta"] = row.delta;
    e["p_hat"] = row.p_hat;
    e["ci"] = {row.ci_lo, row.ci_hi};
    table.push_back(e);
  }
  r["table"] = table;
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].p_hat >= rows[i - 1].p_hat) decreasing = false;
  bool endpoints = rows.front().ci_lo > rows.back().ci_hi;
  r["strictly_decreasing"] = decreasing;
  r["endpoint_cis_separated"] = endpoints;
  r["pass"] = decreasing && endpoints;
  return r;
}

json check_sigma_consistency(std::uint64_t seed) {
  json r;
  r["name"] = "greenkubo-map-consistency";
  SigmaOptions opt;
  opt.seed = seed;
  opt.lag_max = 40;
  opt.ensemble = 30000;
  auto est = estimate_sigma_sq_map(named_observable("cos1"), opt);
  auto oracle = birkhoff_variance_oracle(named_observable("cos1"), 1000000, 1000, seed + 1);
  double rel = std::abs(est.value - oracle.mean) / std::abs(oracle.mean);
  r["sigma_sq"] = est.value;
  r["sigma_sq_stderr"] = est.stderr_;
  r["oracle"] = oracle.mean;
  r["oracle_stderr"] = oracle.stderr_;
  r["rel_deviation"] = rel;

  SigmaOptions copt;
  copt.seed = seed + 2;
  copt.lag_max = 40;
  copt.ensemble = 30000;
  auto cob = estimate_sigma_sq_map(named_observable("coboundary"), copt);
  r["coboundary_sigma_sq"] = cob.value;
  r["coboundary_stderr"] = cob.stderr_;
  bool cob_ok = std::abs(cob.value) <= 2.0 * cob.stderr_;
  r["coboundary_pass"] = cob_ok;
  r["pass"] = rel <= 0.10 && cob_ok;
  return r;
}

json check_micro_gauges(std::uint64_t seed) {
  json r;
  r["name"] = "micro-integrator-gauges";
  const HyperbolicSurface& surface = shared_surface();
  BumpPotential potential(surface, 1.0);
  auto graph = build_complete_graph(2);

  MicroConfig cfg;
  cfg.graph = &graph;
  cfg.surface = &surface;
  cfg.potential = &potential;
  cfg.delta = 0.01;
  cfg.initial_energies = {1.0, 0.5};
  cfg.h = 1e-3;
  cfg.seed = seed;

  cfg.epsilon = 0.0;
  cfg.t_physical_end = 1000.0;
  cfg.record_samples = 64;
  auto frozen = micro_simulate(cfg);
  r["eps0_energy_drift"] = frozen.energy_drift;

  cfg.epsilon = 0.1;
  cfg.t_physical_end = 0.0;
  cfg.t_slow_end = 0.25;  // physical horizon 25
  cfg.rng_index = 1;
  auto coupled = micro_simulate(cfg);
  r["hamiltonian_drift_rel"] = coupled.hamiltonian_drift;

  r["pass"] = frozen.energy_drift <= 1e-8 && coupled.hamiltonian_drift <= 1e-6;
  return r;
}

json verify(const json& config, const std::string& outdir) {
  reject_unknown_keys(config,
                      {"seed", "checks", "reversibility_samples", "hitting_ensemble",
                       "calibration"},
                      "verify");
  std::uint64_t seed = require_seed(config);
  std::vector<std::string> checks = config.value(
      "checks", std::vector<std::string>{"coeffs", "conservation", "drift", "marginal",
                                         "reversibility", "hitting", "sigma", "micro"});
  std::size_t rev_n = config.value("reversibility_samples", std::size_t{1000000});
  std::size_t hit_n = config.value("hitting_ensemble", std::size_t{10000});
  bool calibration = config.value("calibration", true);

  json report;
  report["seed"] = seed;
  report["config_digest"] = config_digest(config);
  json results = json::array();
  bool all = true;
  for (const auto& c : checks) {
    json res;
    if (c == "coeffs")
      res = check_coefficient_identities(seed);
    else if (c == "conservation")
      res = check_conservation(seed);
    else if (c == "drift")
      res = check_drift_identity();
    else if (c == "marginal")
      res = check_invariant_marginal(seed, calibration);
    else if (c == "reversibility")
      res = check_reversibility(seed, rev_n);
    else if (c == "hitting")
      res = check_hitting_trend(seed, hit_n);
    else if (c == "sigma")
      res = check_sigma_consistency(seed);
    else if (c == "micro")
      res = check_micro_gauges(seed);
    else
      throw std::runtime_error("verify: unknown check '" + c + "'");
    all = all && res.value("pass", false);
    results.push_back(res);
  }
  report["checks"] = results;
  report["pass"] = all;
  if (!outdir.empty()) {
    ensure_dir(outdir);
    write_json_file(outdir + "/verify_report.json", report);
  }
  return report;
}

json compare(const json& config, const std::string& outdir) {
  reject_unknown_keys(config,
                      {"seed", "epsilon_ladder", "delta", "t_slow", "initial_energies",
                       "micro_ensemble", "sde_ensemble", "h", "sde_dt", "gamma_csv",
                       "gamma_options", "potential_radius"},
                      "compare");
  std::uint64_t seed = require_seed(config);
  std::vector<double> ladder = config.at("epsilon_ladder").get<std::vector<double>>();
  if (ladder.size() < 2) throw std::runtime_error("epsilon_ladder: need at least two values");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] >= ladder[i - 1])
      throw std::runtime_error("epsilon_ladder: must be strictly decreasing");
  double delta = config.value("delta", 0.01);
  double t_slow = config.value("t_slow", 0.5);
  std::vector<double> e0 = parse_energies(config.at("initial_energies"));
  std::size_t micro_n = config.value("micro_ensemble", std::size_t{400});
  std::size_t sde_n = config.value("sde_ensemble", std::size_t{4000});
  double h = config.value("h", 2e-3);
  double sde_dt = config.value("sde_dt", 1e-3);

  auto graph = build_complete_graph(static_cast<int>(e0.size()));
  const HyperbolicSurface& surface = shared_surface();
  BumpPotential potential(surface, config.value("potential_radius", 1.0));

  // Empirical Gamma table from the same backend and potential.
  GammaTable table;
  if (config.contains("gamma_csv")) {
    table = load_gamma_csv(config.at("gamma_csv").get<std::string>());
  } else {
    RhoOptions gopt;
    gopt.seed = seed + 101;
    json go = config.value("gamma_options", json::object());
    reject_unknown_keys(go, {"dt", "ensemble", "max_points", "tau_grid"}, "gamma_options");
    gopt.dt = go.value("dt", 0.02);
    gopt.ensemble = go.value("ensemble", std::size_t{20000});
    gopt.max_points = go.value("max_points", std::size_t{1200});
    std::vector<double> tau_grid = go.value(
        "tau_grid", std::vector<double>{0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0});
    auto res = estimate_gamma_curve(surface, potential, tau_grid, gopt);
    table = res.table;
  }
  // The microscopic backend is a surface: d = 2 on the SDE side here.
  auto model = CoefficientModel::empirical(table, 2);

  // SDE ensemble: per-site energies at the final slow time.
  std::vector<std::vector<double>> sde_final(e0.size());
  for (std::size_t m = 0; m < sde_n; ++m) {
    SdeRunConfig cfg;
    cfg.graph = &graph;
    cfg.model = &model;
    cfg.initial_energies = e0;
    cfg.dt = sde_dt;
    cfg.t_end = t_slow;
    cfg.seed = seed;
    cfg.rng_purpose = "compare-sde";
    cfg.rng_index = m;
    cfg.record_stride = 1 << 20;
    auto rec = simulate(cfg);
    for (std::size_t x = 0; x < e0.size(); ++x)
      sde_final[x].push_back(rec.energies.back()[x]);
  }

  // Micro ensembles along the epsilon ladder.
  std::vector<std::vector<std::vector<double>>> micro_final(
      ladder.size(), std::vector<std::vector<double>>(e0.size()));
  for (std::size_t li = 0; li < ladder.size(); ++li) {
    for (std::size_t m = 0; m < micro_n; ++m) {
      MicroConfig cfg;
      cfg.graph = &graph;
      cfg.surface = &surface;
      cfg.potential = &potential;
      cfg.epsilon = ladder[li];
      cfg.delta = delta;
      cfg.initial_energies = e0;
      cfg.h = h;
      cfg.t_slow_end = t_slow;
      cfg.record_samples = 2;
      cfg.seed = seed;
      cfg.rng_purpose = "compare-micro-" + std::to_string(li);
      cfg.rng_index = m;
      auto rec = micro_simulate(cfg);
      for (std::size_t x = 0; x < e0.size(); ++x)
        micro_final[li][x].push_back(rec.trajectory.energies.back()[x]);
    }
  }

  json report;
  report["seed"] = seed;
  report["config_digest"] = config_digest(config);
  report["epsilon_ladder"] = ladder;
  json per_site = json::array();
  bool all = true;
  for (std::size_t x = 0; x < e0.size(); ++x) {
    std::vector<std::vector<double>> ladder_samples;
    for (std::size_t li = 0; li < ladder.size(); ++li)
      ladder_samples.push_back(micro_final[li][x]);
    auto res = compare_micro_sde(ladder_samples, sde_final[x]);
    json e;
    e["site"] = x;
    e["ks"] = res.ks;
    e["decreasing"] = res.decreasing;
    e["noise_floor"] = res.noise_floor;
    e["pass"] = res.pass;
    per_site.push_back(e);
    all = all && res.pass;
  }
  report["sites"] = per_site;
  report["pass"] = all;
  if (!outdir.empty()) {
    ensure_dir(outdir);
    write_json_file(outdir + "/compare_report.json", report);
  }
  return report;
}

json run_subcommand(const std::string& name, const json& config, const std::string& outdir) {
  if (name == "simulate-sde") return simulate_sde(config, outdir);
  if (name == "simulate-micro") return simulate_micro(config, outdir);
  if (name == "estimate-gamma") return estimate_gamma(config, outdir);
  if (name == "estimate-sigma") return estimate_sigma(config, outdir);
  if (name == "verify") return verify(config, outdir);
  if (name == "compare") return compare(config, outdir);
  throw std::invalid_argument("unknown subcommand '" + name + "'");
}

}  // namespace elab::runner
