#include "energylab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elab {

namespace {

double bump01(double t) {
  double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t2));
}

}  // namespace

HypothesisReport test_invariant_marginal(const CoefficientModel& model,
                                         const InteractionGraph& graph,
                                         const InvariantMarginalOptions& opt) {
  double shape = 0.5 * model.dim();
  std::vector<double> pooled;
  pooled.reserve(opt.n_trajectories * opt.samples_per_trajectory);
  std::vector<std::vector<double>> rows;  // aligned readings per trajectory
  rows.reserve(opt.n_trajectories);

  for (std::size_t m = 0; m < opt.n_trajectories; ++m) {
    RngStream init_rng(opt.seed, "marginal-init", m);
    SdeRunConfig cfg;
    cfg.graph = &graph;
    cfg.model = &model;
    cfg.initial_energies.resize(graph.n_vertices);
    for (double& e : cfg.initial_energies) e = gamma_sample(init_rng, shape, opt.beta);
    cfg.dt = opt.dt;
    cfg.t_end = opt.t_end;
    cfg.seed = opt.seed;
    cfg.rng_purpose = "marginal-traj";
    cfg.rng_index = m;
    // Record densely enough to pick the requested readings from [t/2, t].
    long n_base = static_cast<long>(std::ceil(opt.t_end / opt.dt));
    cfg.record_stride = std::max<long>(1, n_base / (2 * opt.samples_per_trajectory + 2));
    auto rec = simulate(cfg);

    std::vector<double> series;
    for (std::size_t j = 0; j < rec.times.size(); ++j)
      if (rec.times[j] >= 0.5 * opt.t_end) series.push_back(rec.energies[j][0]);
    if (series.empty()) continue;
    std::size_t take = std::min<std::size_t>(opt.samples_per_trajectory, series.size());
    double step = static_cast<double>(series.size()) / take;
    std::vector<double> row(take);
    for (std::size_t k = 0; k < take; ++k)
      row[k] = series[static_cast<std::size_t>(k * step)];
    pooled.insert(pooled.end(), row.begin(), row.end());
    rows.push_back(std::move(row));
  }

  // Within-trajectory correlation shrinks the pooled information content;
  // trajectories themselves are independent. On graphs with few sites the
  // conserved total keeps readings of one trajectory correlated at all lags
  // (the trajectory remembers its energy shell), so the correction uses the
  // cluster-sampling design effect with the full lag profile, estimated by
  // averaging lagged products across trajectories, rather than an
  // integrated-autocorrelation-time model that assumes decay to zero.
  std::size_t take = rows.empty() ? 0 : rows.front().size();
  double design = 1.0;
  if (take > 1 && rows.size() > 1) {
    double mu = 0.0;
    std::size_t cnt = 0;
    for (const auto& r : rows)
      for (double v : r) {
        mu += v;
        ++cnt;
      }
    mu /= static_cast<double>(cnt);
    auto lag_cov = [&](std::size_t k) {
      double c = 0.0;
      std::size_t n = 0;
      for (const auto& r : rows)
        for (std::size_t j = 0; j + k < r.size(); ++j) {
          c += (r[j] - mu) * (r[j + k] - mu);
          ++n;
        }
      return n ? c / static_cast<double>(n) : 0.0;
    };
    double c0 = lag_cov(0);
    if (c0 > 0.0) {
      double acc = 0.0;
      for (std::size_t k = 1; k < take; ++k) {
        double rho = std::clamp(lag_cov(k) / c0, 0.0, 1.0);
        acc += static_cast<double>(take - k) * rho;
      }
      design = 1.0 + 2.0 * acc / static_cast<double>(take);
    }
  }
  double n_eff = static_cast<double>(pooled.size()) / design;
  if (n_eff < 1000.0)
    throw std::runtime_error("invariant marginal: fewer than 10^3 effective samples; lengthen the run");

  std::sort(pooled.begin(), pooled.end());
  std::vector<double> cdf(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i)
    cdf[i] = gamma_cdf(shape, opt.beta, pooled[i]);
  double d = ks_statistic_sorted(pooled, cdf);
  double p = ks_pvalue(d, n_eff);

  HypothesisReport rep;
  rep.name = "invariant-marginal";
  rep.statistic = d;
  rep.p_value = p;
  rep.pass = p >= opt.alpha;
  rep.n_samples = pooled.size();
  rep.effective_samples = n_eff;
  rep.seed = opt.seed;
  std::ostringstream os;
  os << "KS D=" << d << " p=" << p << " n_eff=" << n_eff << " design_effect=" << design;
  rep.details = os.str();
  return rep;
}

double calibrate_invariant_marginal_null(const CoefficientModel& model, double beta,
                                         std::size_t n_repeats, std::size_t n_per_test,
                                         double alpha, std::uint64_t seed) {
  double shape = 0.5 * model.dim();
  std::size_t rejects = 0;
  for (std::size_t r = 0; r < n_repeats; ++r) {
    RngStream rng(seed, "marginal-calibration", r);
    std::vector<double> xs(n_per_test);
    for (double& x : xs) x = gamma_sample(rng, shape, beta);
    std::sort(xs.begin(), xs.end());
    std::vector<double> cdf(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) cdf[i] = gamma_cdf(shape, beta, xs[i]);
    double d = ks_statistic_sorted(xs, cdf);
    if (ks_pvalue(d, static_cast<double>(n_per_test)) < alpha) ++rejects;
  }
  return static_cast<double>(rejects) / n_repeats;
}

double eval_test_function(const TestFunction& f, const std::vector<double>& E) {
  double v = 1.0;
  for (std::size_t i = 0; i < f.center.size() && i < E.size(); ++i) {
    if (f.width[i] <= 0.0) continue;
    v *= bump01((E[i] - f.center[i]) / f.width[i]);
  }
  return v;
}

double apply_generator(const CoefficientModel& model, const InteractionGraph& graph,
                       const TestFunction& f, std::vector<double> E) {
  // L f = sum_edges [ a (d/dEx - d/dEy) f + beta^2 (d/dEx - d/dEy)^2 f ]
  const double h = 1e-4;
  double out = 0.0;
  for (const auto& e : graph.edges) {
    int x = e[0], y = e[1];
    double Ex = E[x], Ey = E[y];
    auto shifted = [&](double sx, double sy) {
      E[x] = Ex + sx;
      E[y] = Ey + sy;
      double v = eval_test_function(f, E);
      E[x] = Ex;
      E[y] = Ey;
      return v;
    };
    // directional derivative along (1,-1) in the (Ex,Ey) plane
    double f0 = shifted(0.0, 0.0);
    double fp = shifted(h, -h);
    double fm = shifted(-h, h);
    double d1 = (fp - fm) / (2.0 * h);
    double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    out += model.drift(Ex, Ey) * d1 + model.beta_sq(Ex, Ey) * d2;
  }
  return out;
}

HypothesisReport test_reversibility(const CoefficientModel& model,
                                    const InteractionGraph& graph, const TestFunction& phi,
                                    const TestFunction& h, const ReversibilityOptions& opt) {
  double shape = 0.5 * model.dim();
  RngStream rng(opt.seed, "reversibility");
  std::vector<double> E(graph.n_vertices);
  std::vector<double> diffs(opt.n_samples);
  for (std::size_t i = 0; i < opt.n_samples; ++i) {
    for (double& e : E) e = gamma_sample(rng, shape, opt.beta);
    double lhs = eval_test_function(phi, E) * apply_generator(model, graph, h, E);
    double rhs = eval_test_function(h, E) * apply_generator(model, graph, phi, E);
    diffs[i] = lhs - rhs;
  }
  auto ms = mean_stderr(diffs);
  HypothesisReport rep;
  rep.name = "reversibility";
  rep.statistic = ms.stderr_ > 0.0 ? ms.mean / ms.stderr_ : 0.0;
  rep.pass = std::abs(ms.mean) <= opt.tolerance_sigmas * ms.stderr_ + 1e-14;
  rep.n_samples = opt.n_samples;
  rep.effective_samples = static_cast<double>(opt.n_samples);
  rep.seed = opt.seed;
  std::ostringstream os;
  os << "E(phi Lh - h Lphi) = " << ms.mean << " +- " << ms.stderr_;
  rep.details = os.str();
  return rep;
}

HypothesisReport test_drift_identity(const CoefficientModel& model,
                                     const std::vector<std::pair<double, double>>& grid,
                                     double tolerance) {
  const double h = 1e-5;  // step in ln E
  const double d = model.dim();
  auto D = [&](double Ex, double Ey) {
    // h0 * beta^2 with h0 = (Ex Ey)^{d/2-1}
    return std::pow(Ex * Ey, 0.5 * d - 1.0) * model.beta_sq(Ex, Ey);
  };
  double max_rel = 0.0;
  for (auto [Ex, Ey] : grid) {
    double h0 = std::pow(Ex * Ey, 0.5 * d - 1.0);
    double ddx = (D(Ex * std::exp(h), Ey) - D(Ex * std::exp(-h), Ey)) / (2.0 * h * Ex);
    double ddy = (D(Ex, Ey * std::exp(h)) - D(Ex, Ey * std::exp(-h))) / (2.0 * h * Ey);
    double a_div = (ddx - ddy) / h0;
    double a_model = model.drift(Ex, Ey);
    double scale = std::max({std::abs(a_model), std::abs(a_div),
                             model.beta_sq(Ex, Ey) / std::max(Ex, Ey)});
    if (scale == 0.0) continue;
    max_rel = std::max(max_rel, std::abs(a_div - a_model) / scale);
  }
  HypothesisReport rep;
  rep.name = "drift-identity";
  rep.statistic = max_rel;
  rep.pass = max_rel <= tolerance;
  rep.n_samples = grid.size();
  std::ostringstream os;
  os << "max relative deviation " << max_rel << " over " << grid.size() << " grid points";
  rep.details = os.str();
  return rep;
}

std::vector<HittingRow> estimate_hitting_probability(const CoefficientModel& model,
                                                     const InteractionGraph& graph,
                                                     const std::vector<double>& initial,
                                                     const HittingOptions& opt) {
  if (opt.delta_list.empty()) throw std::invalid_argument("hitting: empty delta list");
  double delta_min = *std::min_element(opt.delta_list.begin(), opt.delta_list.end());
  std::vector<double> minima(opt.ensemble);
  for (std::size_t m = 0; m < opt.ensemble; ++m) {
    SdeRunConfig cfg;
    cfg.graph = &graph;
    cfg.model = &model;
    cfg.initial_energies = initial;
    cfg.dt = opt.dt;
    cfg.t_end = opt.t_end;
    cfg.delta_stop = delta_min;  // all thresholds are hit once the smallest is
    cfg.seed = opt.seed;
    cfg.rng_purpose = "hitting-traj";
    cfg.rng_index = m;
    cfg.record_stride = 1 << 20;  // only the running minimum is needed
    auto rec = simulate(cfg);
    minima[m] = rec.min_energy_seen;
  }
  std::vector<HittingRow> rows;
  for (double delta : opt.delta_list) {
    HittingRow r;
    r.delta = delta;
    for (double m : minima)
      if (m <= delta) ++r.hits;
    r.p_hat = static_cast<double>(r.hits) / opt.ensemble;
    auto [lo, hi] = wilson_ci95(r.hits, opt.ensemble);
    r.ci_lo = lo;
    r.ci_hi = hi;
    rows.push_back(r);
  }
  return rows;
}

long count_downcrossings(const std::vector<double>& series, double hi, double lo) {
  if (!(hi > lo)) throw std::invalid_argument("downcrossings: need hi > lo");
  long count = 0;
  bool armed = false;  // above hi since the last downcrossing
  for (double v : series) {
    if (v >= hi) armed = true;
    if (armed && v <= lo) {
      ++count;
      armed = false;
    }
  }
  return count;
}

CompareResult compare_micro_sde(const std::vector<std::vector<double>>& micro_samples_by_eps,
                                const std::vector<double>& sde_samples) {
  if (micro_samples_by_eps.empty() || sde_samples.size() < 2)
    throw std::invalid_argument("compare: need micro ladder and an SDE sample");
  CompareResult res;
  double n2 = static_cast<double>(sde_samples.size());
  for (const auto& micro : micro_samples_by_eps) {
    if (micro.size() < 2) throw std::invalid_argument("compare: empty micro ensemble");
    res.ks.push_back(ks_two_sample(micro, sde_samples));
  }
  res.decreasing = true;
  for (std::size_t i = 1; i < res.ks.size(); ++i)
    if (res.ks[i] >= res.ks[i - 1]) res.decreasing = false;
  double n1 = static_cast<double>(micro_samples_by_eps.back().size());
  res.noise_floor = 1.358 * std::sqrt((n1 + n2) / (n1 * n2));  // 95% critical distance
  res.pass = res.decreasing && res.ks.back() <= res.noise_floor;
  return res;
}

}  // namespace elab
