#include "energylab/greenkubo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elab {

namespace {

struct PairState {
  Mat2 xi, eta;
  double c0 = 0.0;  // L1V at time 0
};

std::vector<PairState> init_pairs(const HyperbolicSurface& surface,
                                  const BumpPotential& potential, std::size_t ensemble,
                                  std::uint64_t seed, const std::string& purpose) {
  std::vector<PairState> ps(ensemble);
  for (std::size_t i = 0; i < ensemble; ++i) {
    RngStream rng(seed, purpose, i);
    ps[i].xi = surface.sample_haar(rng);
    ps[i].eta = surface.sample_haar(rng);
    ps[i].c0 = potential.coupling_current(ps[i].xi, ps[i].eta);
  }
  return ps;
}

double current_at(const BumpPotential& potential, const PairState& p) {
  return potential.coupling_current(p.xi, p.eta);
}

void advance_pair(const HyperbolicSurface& surface, PairState& p, double a, double b,
                  double dt) {
  p.xi = advance_fast(surface, p.xi, a, dt);
  p.eta = advance_fast(surface, p.eta, b, dt);
}

// Linear interpolation on a uniform table; zero beyond the last point.
double table_at(const std::vector<double>& v, double ds, double s) {
  double x = s / ds;
  if (x <= 0.0) return v.front();
  auto j = static_cast<std::size_t>(x);
  if (j + 1 >= v.size()) return 0.0;
  double f = x - static_cast<double>(j);
  return v[j] * (1.0 - f) + v[j + 1] * f;
}

// Trapezoid integral of the table over [s0, end of table].
double table_integral_from(const std::vector<double>& v, double ds, double s0) {
  if (v.size() < 2) return 0.0;
  double send = ds * static_cast<double>(v.size() - 1);
  if (s0 >= send) return 0.0;
  if (s0 < 0.0) s0 = 0.0;
  auto j0 = static_cast<std::size_t>(s0 / ds);
  if (j0 + 1 >= v.size()) return 0.0;
  double s1 = ds * static_cast<double>(j0 + 1);
  double v0 = table_at(v, ds, s0);
  double sum = 0.5 * (s1 - s0) * (v0 + v[j0 + 1]);
  for (std::size_t j = j0 + 1; j + 1 < v.size(); ++j) sum += 0.5 * ds * (v[j] + v[j + 1]);
  return sum;
}

}  // namespace

std::vector<MeanStderr> estimate_pair_correlation(const HyperbolicSurface& surface,
                                                  const BumpPotential& potential, double a,
                                                  double b, double step, std::size_t n_points,
                                                  std::size_t ensemble, std::uint64_t seed,
                                                  const std::string& rng_purpose) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("pair correlation: speeds must be positive");
  if (!(step > 0.0) || n_points == 0 || ensemble == 0)
    throw std::invalid_argument("pair correlation: bad grid or ensemble");
  auto ps = init_pairs(surface, potential, ensemble, seed, rng_purpose);
  std::vector<MeanStderr> out(n_points);
  std::vector<double> vals(ensemble);
  for (std::size_t j = 0; j < n_points; ++j) {
    for (std::size_t i = 0; i < ensemble; ++i) {
      if (j > 0) advance_pair(surface, ps[i], a, b, step);
      vals[i] = ps[i].c0 * current_at(potential, ps[i]);
    }
    out[j] = mean_stderr(vals);
  }
  return out;
}

FlowCorrelationTables build_flow_tables(const HyperbolicSurface& surface,
                                        const BumpPotential& potential,
                                        const RhoOptions& opt) {
  std::size_t n = opt.ensemble;
  std::size_t K = std::min<std::size_t>(std::max<std::size_t>(opt.blocks, 2), n / 2);
  std::size_t J = opt.max_points;
  if (n < 8) throw std::invalid_argument("flow tables: ensemble too small");
  if (!(opt.dt > 0.0) || J < 8) throw std::invalid_argument("flow tables: bad grid");

  std::vector<std::vector<double>> cd(K, std::vector<double>(J + 1, 0.0));
  std::vector<std::vector<double>> cu(K, std::vector<double>(J + 1, 0.0));
  std::vector<double> su(K, 0.0);
  std::vector<std::size_t> nb(K, 0);

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = i % K;
    RngStream rng(opt.seed, opt.rng_purpose, i);
    Mat2 x = surface.sample_haar(rng);
    double d0 = potential.u_dot(x);
    double u0 = potential.u(x);
    cd[k][0] += d0 * d0;
    cu[k][0] += u0 * u0;
    su[k] += u0;
    for (std::size_t j = 1; j <= J; ++j) {
      x = advance_fast(surface, x, 1.0, opt.dt);
      double uj = potential.u(x);
      cd[k][j] += d0 * potential.u_dot(x);
      cu[k][j] += u0 * uj;
      su[k] += uj;
    }
    ++nb[k];
  }

  FlowCorrelationTables t;
  t.ds = opt.dt;
  t.ensemble = n;
  t.eu2_block.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    double inv = 1.0 / static_cast<double>(nb[k]);
    for (std::size_t j = 0; j <= J; ++j) {
      cd[k][j] *= inv;
      cu[k][j] *= inv;
    }
    double eu = su[k] * inv / static_cast<double>(J + 1);
    t.eu2_block[k] = eu * eu;
    for (std::size_t j = 0; j <= J; ++j) cu[k][j] -= t.eu2_block[k];
  }

  // Pooled curves and block standard errors.
  std::vector<double> pcd(J + 1, 0.0), pcu(J + 1, 0.0), scd(J + 1, 0.0), scu(J + 1, 0.0);
  double eu2 = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    eu2 += t.eu2_block[k];
    for (std::size_t j = 0; j <= J; ++j) {
      pcd[j] += cd[k][j];
      pcu[j] += cu[k][j];
    }
  }
  double invK = 1.0 / static_cast<double>(K);
  eu2 *= invK;
  for (std::size_t j = 0; j <= J; ++j) {
    pcd[j] *= invK;
    pcu[j] *= invK;
  }
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j <= J; ++j) {
      double dd = cd[k][j] - pcd[j], du = cu[k][j] - pcu[j];
      scd[j] += dd * dd;
      scu[j] += du * du;
    }
  double norm = 1.0 / (static_cast<double>(K) * static_cast<double>(K - 1));
  for (std::size_t j = 0; j <= J; ++j) {
    scd[j] = std::sqrt(scd[j] * norm);
    scu[j] = std::sqrt(scu[j] * norm);
  }

  // Adaptive window: first s past min_window where both curves sit below the
  // noise floor for noise_run consecutive points.
  int below_run = 0;
  std::size_t jw = 0;
  bool found = false;
  for (std::size_t j = 1; j <= J; ++j) {
    bool quiet = std::abs(pcd[j]) < opt.noise_mult * scd[j] &&
                 std::abs(pcu[j]) < opt.noise_mult * scu[j];
    if (j * opt.dt >= opt.min_window && quiet)
      ++below_run;
    else
      below_run = 0;
    if (below_run >= opt.noise_run) {
      jw = j;
      found = true;
      break;
    }
  }
  if (!found)
    throw std::runtime_error(
        "flow tables: correlations did not decay below the noise floor within the window cap");

  t.window = jw * opt.dt;
  t.eu2 = eu2;
  t.cd.assign(pcd.begin(), pcd.begin() + jw + 1);
  t.cu_centered.assign(pcu.begin(), pcu.begin() + jw + 1);
  t.cd_se.assign(scd.begin(), scd.begin() + jw + 1);
  t.cu_se.assign(scu.begin(), scu.begin() + jw + 1);
  t.cd_block.resize(K);
  t.cuc_block.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    t.cd_block[k].assign(cd[k].begin(), cd[k].begin() + jw + 1);
    t.cuc_block[k].assign(cu[k].begin(), cu[k].begin() + jw + 1);
  }
  return t;
}

CorrelationEstimate rho_from_tables(const FlowCorrelationTables& t, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("rho: speeds must be positive");
  if (t.cd.size() < 2) throw std::invalid_argument("rho: tables not built");

  const double S = t.window;
  const double m = std::max(a, b);
  const std::size_t Jw = t.cd.size() - 1;
  const double dtq = t.ds / m;  // quadrature step in t; arguments advance by ds

  std::size_t K = t.cd_block.size();
  std::vector<double> vals(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& cdv = t.cd_block[k];
    const auto& cuv = t.cuc_block[k];
    double eu2 = t.eu2_block[k];
    // Phase 1: both factors tabulated, t in [0, S/m].
    double I1 = 0.0, prev = cdv[0] * (cuv[0] + eu2);
    for (std::size_t j = 1; j <= Jw; ++j) {
      double sa = (a / m) * static_cast<double>(j) * t.ds;
      double sb = (b / m) * static_cast<double>(j) * t.ds;
      double cur = table_at(cdv, t.ds, sa) * (table_at(cuv, t.ds, sb) + eu2);
      I1 += 0.5 * dtq * (prev + cur);
      prev = cur;
    }
    // Phase 2 (only when a < b): the centered Cu factor is already dead, the
    // plateau multiplies the remaining integral of Cd.
    double I2 = 0.0;
    if (a < m) I2 = (eu2 / a) * table_integral_from(cdv, t.ds, (a / m) * S);
    vals[k] = 2.0 * (I1 + I2);
  }

  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(K);
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= static_cast<double>(K) * static_cast<double>(K - 1);

  // Diagnostic tail bound: exponential envelope of |Cd| over the second half
  // of the window, times the plateau weight. The window rule already keeps
  // the tail below the noise floor, so the bound is reported, not added.
  double tail = 0.0;
  {
    std::size_t lo = Jw / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t j = lo; j <= Jw; ++j) {
      double v = std::abs(t.cd[j]);
      if (v <= 0.0) continue;
      double x = j * t.ds, y = std::log(v);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++cnt;
    }
    if (cnt >= 3) {
      double denom = cnt * sxx - sx * sx;
      if (denom > 0.0) {
        double slope = (cnt * sxy - sx * sy) / denom;
        if (slope < 0.0) tail = 2.0 * (t.eu2 / a) * std::abs(t.cd[Jw]) / (-slope);
      }
    }
  }

  CorrelationEstimate est;
  est.value = mean;
  est.stderr_ = std::sqrt(var);
  est.window = S / a;
  est.tail = tail;
  est.ensemble = t.ensemble;
  return est;
}

CorrelationEstimate estimate_rho(const HyperbolicSurface& surface,
                                 const BumpPotential& potential, double a, double b,
                                 const RhoOptions& opt) {
  auto t = build_flow_tables(surface, potential, opt);
  return rho_from_tables(t, a, b);
}

CorrelationEstimate estimate_rho_direct(const HyperbolicSurface& surface,
                                        const BumpPotential& potential, double a, double b,
                                        const RhoOptions& opt) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("rho: speeds must be positive");
  if (opt.ensemble < 2) throw std::invalid_argument("rho: ensemble too small");

  auto ps = init_pairs(surface, potential, opt.ensemble, opt.seed, opt.rng_purpose);
  std::size_t n = opt.ensemble;

  std::vector<double> integral(n, 0.0);  // per-member trapezoid on [0, t_j]
  std::vector<double> c_prev(n), c_cur(n);
  std::vector<double> mean_curve;  // mean of c at each grid point
  mean_curve.reserve(opt.max_points);

  for (std::size_t i = 0; i < n; ++i) c_prev[i] = ps[i].c0 * ps[i].c0;
  mean_curve.push_back(mean_stderr(c_prev).mean);

  int below_run = 0;
  std::size_t window_idx = 0;
  bool found = false;
  for (std::size_t j = 1; j < opt.max_points; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      advance_pair(surface, ps[i], a, b, opt.dt);
      c_cur[i] = ps[i].c0 * current_at(potential, ps[i]);
      integral[i] += 0.5 * opt.dt * (c_prev[i] + c_cur[i]);
      c_prev[i] = c_cur[i];
    }
    auto ms = mean_stderr(c_cur);
    mean_curve.push_back(ms.mean);
    if (j * opt.dt >= opt.min_window && std::abs(ms.mean) < opt.noise_mult * ms.stderr_)
      ++below_run;
    else
      below_run = 0;
    if (below_run >= opt.noise_run) {
      window_idx = j;
      found = true;
      break;
    }
  }
  if (!found)
    throw std::runtime_error("rho: correlation did not decay below the noise floor within the window cap");

  double window = window_idx * opt.dt;

  // Exponential tail from the mean curve over the second half of the window.
  double tail = 0.0;
  {
    std::size_t lo = window_idx / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t j = lo; j <= window_idx; ++j) {
      if (mean_curve[j] <= 0.0) continue;
      double x = j * opt.dt, y = std::log(mean_curve[j]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++m;
    }
    if (m >= 3) {
      double denom = m * sxx - sx * sx;
      if (denom > 0.0) {
        double slope = (m * sxy - sx * sy) / denom;
        if (slope < 0.0) {
          double c_end = std::max(mean_curve[window_idx], 0.0);
          tail = c_end / (-slope);
        }
      }
    }
  }

  std::vector<double> rho_members(n);
  for (std::size_t i = 0; i < n; ++i) rho_members[i] = 2.0 * integral[i];
  auto ms = mean_stderr(rho_members);

  CorrelationEstimate est;
  est.value = ms.mean + 2.0 * tail;
  est.stderr_ = ms.stderr_;
  est.window = window;
  est.tail = 2.0 * tail;
  est.ensemble = n;
  return est;
}

GammaCurveResult gamma_curve_from_tables(const FlowCorrelationTables& tables,
                                         const std::vector<double>& tau_grid,
                                         double tail_min_tau) {
  if (tau_grid.empty()) throw std::invalid_argument("gamma curve: empty grid");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > 0.0)) throw std::invalid_argument("gamma curve: tau must be positive");
    if (i > 0 && tau_grid[i] <= tau_grid[i - 1])
      throw std::invalid_argument("gamma curve: tau grid must be strictly increasing");
  }

  GammaCurveResult res;
  res.table.tau = tau_grid;
  res.table.gamma.resize(tau_grid.size());
  res.table.stderr_.resize(tau_grid.size());
  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    double tau = tau_grid[k];
    if (tau <= 1.0) {
      auto est = rho_from_tables(tables, tau, 1.0);
      res.table.gamma[k] = est.value;
      res.table.stderr_[k] = est.stderr_;
    } else {
      // Gamma(tau) = tau^{-3} Gamma(1/tau), exact by homogeneity plus the
      // a^2 rho(a,b) = b^2 rho(b,a) symmetry; the reflected form keeps the
      // relative error of the slow-speed estimate instead of the absolute
      // cancellation error of the fast-speed one.
      auto est = rho_from_tables(tables, 1.0 / tau, 1.0);
      double s = std::pow(tau, -3.0);
      res.table.gamma[k] = s * est.value;
      res.table.stderr_[k] = s * est.stderr_;
    }
  }

  // Constant least-squares fit of (1 + tau^3) Gamma(tau) over the tail.
  std::vector<std::size_t> tail_idx;
  for (std::size_t k = 0; k < tau_grid.size(); ++k)
    if (tau_grid[k] >= tail_min_tau) tail_idx.push_back(k);
  if (tail_idx.size() < 2) {
    tail_idx.clear();
    for (std::size_t k = (3 * tau_grid.size()) / 4; k < tau_grid.size(); ++k)
      tail_idx.push_back(k);
  }
  double sum = 0.0;
  for (std::size_t k : tail_idx) sum += res.table.gamma[k] * (1.0 + std::pow(tau_grid[k], 3.0));
  res.fitted_A = sum / static_cast<double>(tail_idx.size());
  double ss = 0.0;
  for (std::size_t k : tail_idx) {
    double v = res.table.gamma[k] * (1.0 + std::pow(tau_grid[k], 3.0));
    ss += (v - res.fitted_A) * (v - res.fitted_A);
  }
  res.fit_residual =
      std::sqrt(ss / static_cast<double>(tail_idx.size())) / std::abs(res.fitted_A);
  return res;
}

GammaCurveResult estimate_gamma_curve(const HyperbolicSurface& surface,
                                      const BumpPotential& potential,
                                      const std::vector<double>& tau_grid,
                                      const RhoOptions& opt, double tail_min_tau) {
  if (tau_grid.empty()) throw std::invalid_argument("gamma curve: empty grid");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > 0.0)) throw std::invalid_argument("gamma curve: tau must be positive");
    if (i > 0 && tau_grid[i] <= tau_grid[i - 1])
      throw std::invalid_argument("gamma curve: tau grid must be strictly increasing");
  }
  // One set of tables for the whole curve: common random numbers across tau.
  auto tables = build_flow_tables(surface, potential, opt);
  return gamma_curve_from_tables(tables, tau_grid, tail_min_tau);
}

CorrelationEstimate estimate_sigma_sq_map(const std::function<double(const TorusPoint&)>& A,
                                          const SigmaOptions& opt) {
  if (!A) throw std::invalid_argument("sigma: observable required");
  if (opt.ensemble < 2 || opt.lag_max < 1) throw std::invalid_argument("sigma: bad options");

  // Zero-mean check.
  {
    RngStream rng(opt.seed, opt.rng_purpose + "-mean");
    std::vector<double> vals(100000);
    for (double& v : vals) v = A(sample_torus_uniform(rng));
    auto ms = mean_stderr(vals);
    if (std::abs(ms.mean) > 4.0 * ms.stderr_ + 1e-12)
      throw std::runtime_error("sigma: observable mean differs from 0 beyond 4 standard errors");
  }

  std::size_t n = opt.ensemble;
  // Per-member orbit values A(f^k x), k = 0..lag_max.
  std::vector<std::vector<double>> lag_vals(opt.lag_max + 1, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(opt.seed, opt.rng_purpose, i);
    TorusPoint x = sample_torus_uniform(rng);
    double a0 = A(x);
    lag_vals[0][i] = a0 * a0;
    for (int k = 1; k <= opt.lag_max; ++k) {
      x = cat_map(x);
      lag_vals[k][i] = a0 * A(x);
    }
  }

  // sigma^2 = c(0) + 2 sum_{k>=1} c(k), truncated when |c| stays below the
  // noise floor; per-member partial sums give the standard error.
  std::vector<MeanStderr> cs(opt.lag_max + 1);
  for (int k = 0; k <= opt.lag_max; ++k) cs[k] = mean_stderr(lag_vals[k]);
  int below_run = 0, cut = opt.lag_max;
  for (int k = 1; k <= opt.lag_max; ++k) {
    if (std::abs(cs[k].mean) < opt.noise_mult * cs[k].stderr_)
      ++below_run;
    else
      below_run = 0;
    if (below_run >= opt.noise_run) {
      cut = k;
      break;
    }
  }
  std::vector<double> partial(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = lag_vals[0][i];
    for (int k = 1; k <= cut; ++k) s += 2.0 * lag_vals[k][i];
    partial[i] = s;
  }
  auto ms = mean_stderr(partial);
  CorrelationEstimate est;
  est.value = ms.mean;
  est.stderr_ = ms.stderr_;
  est.window = cut;
  est.ensemble = n;
  return est;
}

MeanStderr birkhoff_variance_oracle(const std::function<double(const TorusPoint&)>& A,
                                    long N, std::size_t ensemble, std::uint64_t seed) {
  if (!A || N < 1 || ensemble < 2) throw std::invalid_argument("oracle: bad arguments");
  std::vector<double> sums(ensemble);
  for (std::size_t i = 0; i < ensemble; ++i) {
    RngStream rng(seed, "birkhoff-oracle", i);
    TorusPoint x = sample_torus_uniform(rng);
    double s = 0.0;
    for (long k = 0; k < N; ++k) {
      s += A(x);
      x = cat_map(x);
    }
    sums[i] = s / std::sqrt(static_cast<double>(N));
  }
  // Variance of the normalized sums; stderr via the fourth moment of the
  // (approximately centered) sample.
  auto ms = mean_stderr(sums);
  double var = 0.0, m4 = 0.0;
  for (double s : sums) {
    double d = s - ms.mean;
    var += d * d;
    m4 += d * d * d * d;
  }
  var /= (ensemble - 1);
  m4 /= ensemble;
  MeanStderr out;
  out.mean = var;
  out.stderr_ = std::sqrt(std::max(0.0, m4 - var * var) / ensemble);
  out.n = ensemble;
  return out;
}

}  // namespace elab
