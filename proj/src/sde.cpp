#include "energylab/sde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elab {

namespace {

std::string digest_of(const SdeRunConfig& c) {
  std::ostringstream os;
  os << "sde|n=" << (c.graph ? c.graph->n_vertices : 0) << "|m="
     << (c.graph ? c.graph->n_edges() : 0) << "|dt=" << c.dt << "|t_end=" << c.t_end
     << "|delta_stop=" << c.delta_stop << "|seed=" << c.seed << "|stride=" << c.record_stride;
  for (double e : c.initial_energies) os << "|" << e;
  std::ostringstream hex;
  hex << std::hex << fnv1a(os.str());
  return hex.str();
}

double pick_dt(const SdeRunConfig& c) {
  if (c.dt > 0.0) return c.dt;
  double mean = 0.0;
  for (double e : c.initial_energies) mean += e;
  mean /= std::max<std::size_t>(1, c.initial_energies.size());
  double a = c.model ? c.model->A() : 1.0;
  return 1e-4 * std::pow(mean, 1.5) / a;
}

void validate_config(const SdeRunConfig& c) {
  if (!c.graph || !c.model) throw std::invalid_argument("sde: graph and model are required");
  if (c.initial_energies.size() != c.graph->n_vertices)
    throw std::invalid_argument("sde: initial energies must match vertex count");
  for (double e : c.initial_energies)
    if (!(e > 0.0)) throw std::invalid_argument("sde: initial energies must be positive");
  if (!(c.t_end > 0.0)) throw std::invalid_argument("sde: t_end must be positive");
  if (c.record_stride < 1) throw std::invalid_argument("sde: record_stride must be >= 1");
}

}  // namespace

std::vector<double> sample_edge_noise(const InteractionGraph& g, double dt, RngStream& rng) {
  std::vector<double> w(g.n_edges());
  double s = std::sqrt(dt);
  for (double& x : w) x = rng.gaussian(0.0, s);
  return w;
}

std::optional<EnergyState> em_step(const EnergyState& state, const InteractionGraph& g,
                                   const CoefficientModel& model, double dt,
                                   const std::vector<double>& edge_noise) {
  EnergyState next = state;
  for (std::size_t e = 0; e < g.n_edges(); ++e) {
    int x = g.edges[e][0], y = g.edges[e][1];
    double Ex = state.energies[x], Ey = state.energies[y];
    double q = model.drift(Ex, Ey) * dt +
               std::sqrt(2.0 * model.beta_sq(Ex, Ey)) * edge_noise[e];
    // One quantity, applied with opposite signs: the sum is conserved exactly.
    next.energies[x] += q;
    next.energies[y] -= q;
  }
  for (double e : next.energies)
    if (!(e > 0.0)) return std::nullopt;
  next.time = state.time + dt;
  return next;
}

namespace {

// Advance by dt with the given edge increments, splitting the step by a
// Brownian bridge when positivity fails.
EnergyState advance_refined(const EnergyState& state, const InteractionGraph& g,
                            const CoefficientModel& model, double dt,
                            const std::vector<double>& w, RngStream& rng, int depth,
                            int max_depth, double& min_seen) {
  auto next = em_step(state, g, model, dt, w);
  if (next) {
    for (double e : next->energies) min_seen = std::min(min_seen, e);
    return *next;
  }
  if (depth >= max_depth)
    throw std::runtime_error("sde: positivity could not be restored by step refinement");
  // Bridge split: W = W1 + W2 with W1 ~ N(W/2, dt/4) conditionally.
  std::vector<double> w1(w.size()), w2(w.size());
  double half_sd = 0.5 * std::sqrt(dt);
  for (std::size_t i = 0; i < w.size(); ++i) {
    w1[i] = rng.gaussian(0.5 * w[i], half_sd);
    w2[i] = w[i] - w1[i];
  }
  EnergyState mid = advance_refined(state, g, model, 0.5 * dt, w1, rng, depth + 1, max_depth,
                                    min_seen);
  return advance_refined(mid, g, model, 0.5 * dt, w2, rng, depth + 1, max_depth, min_seen);
}

}  // namespace

TrajectoryRecord simulate(const SdeRunConfig& config) {
  validate_config(config);
  const InteractionGraph& g = *config.graph;
  const CoefficientModel& model = *config.model;
  double dt = pick_dt(config);
  RngStream rng(config.seed, config.rng_purpose, config.rng_index);

  TrajectoryRecord rec;
  rec.seed = config.seed;
  rec.config_digest = digest_of(config);

  EnergyState state{config.initial_energies, 0.0};
  double min_seen = *std::min_element(state.energies.begin(), state.energies.end());
  rec.times.push_back(0.0);
  rec.energies.push_back(state.energies);

  long n_steps = static_cast<long>(std::ceil(config.t_end / dt - 1e-12));
  for (long step = 0; step < n_steps; ++step) {
    double h = std::min(dt, config.t_end - state.time);
    if (h <= 0.0) break;
    auto w = sample_edge_noise(g, h, rng);
    state = advance_refined(state, g, model, h, w, rng, 0, config.max_halvings, min_seen);
    bool hit = false;
    if (config.delta_stop > 0.0) {
      double m = *std::min_element(state.energies.begin(), state.energies.end());
      hit = m <= config.delta_stop;
    }
    if ((step + 1) % config.record_stride == 0 || step + 1 == n_steps || hit) {
      rec.times.push_back(state.time);
      rec.energies.push_back(state.energies);
    }
    if (hit) {
      rec.stopped = true;
      rec.stop_time = state.time;
      break;
    }
  }
  rec.min_energy_seen = min_seen;
  return rec;
}

namespace {

double phi_of_z(const CutoffFamily& cut, double z) { return cut.phi(std::exp(z)); }

// g1 = e^{-zx} phi_x^2 phi_y^2 rho_xy and g2 = e^{-zy} phi_x phi_y^3 rho_xy,
// the two diffusion products whose difference drives the log-coordinate
// drift.
double g1_of(const CoefficientModel& m, const CutoffFamily& cut, double zx, double zy) {
  double px = phi_of_z(cut, zx), py = phi_of_z(cut, zy);
  return std::exp(-zx) * px * px * py * py * m.rho(cut.omega(zx), cut.omega(zy));
}
double g2_of(const CoefficientModel& m, const CutoffFamily& cut, double zx, double zy) {
  double px = phi_of_z(cut, zx), py = phi_of_z(cut, zy);
  return std::exp(-zy) * px * py * py * py * m.rho(cut.omega(zx), cut.omega(zy));
}

}  // namespace

double log_edge_beta(const CoefficientModel& model, const CutoffFamily& cutoff, double zx,
                     double zy) {
  double px = phi_of_z(cutoff, zx), py = phi_of_z(cutoff, zy);
  double r = model.rho(cutoff.omega(zx), cutoff.omega(zy));
  return std::sqrt(2.0) * std::exp(-0.5 * zx) * px * py * std::sqrt(std::max(0.0, r));
}

double log_drift_site(const CoefficientModel& model, const CutoffFamily& cutoff,
                      const InteractionGraph& g, const std::vector<double>& z, std::size_t x) {
  const double h = 1e-5;
  double a = 0.0;
  for (int y : g.adjacency[x]) {
    double zx = z[x], zy = z[y];
    double d1 = (g1_of(model, cutoff, zx + h, zy) - g1_of(model, cutoff, zx - h, zy)) / (2.0 * h);
    double d2 = (g2_of(model, cutoff, zx, zy + h) - g2_of(model, cutoff, zx, zy - h)) / (2.0 * h);
    double g1 = g1_of(model, cutoff, zx, zy);
    double g2 = g2_of(model, cutoff, zx, zy);
    a += (d1 - d2) + 0.5 * model.dim() * (g1 - g2);
  }
  return a;
}

TrajectoryRecord simulate_log_coords(const SdeRunConfig& config, const CutoffFamily& cutoff) {
  validate_config(config);
  const InteractionGraph& g = *config.graph;
  const CoefficientModel& model = *config.model;
  double dt = pick_dt(config);
  RngStream rng(config.seed, config.rng_purpose, config.rng_index);

  TrajectoryRecord rec;
  rec.seed = config.seed;
  rec.config_digest = digest_of(config);

  std::vector<double> z(config.initial_energies.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::log(config.initial_energies[i]);
  double t = 0.0;
  double min_seen = std::exp(*std::min_element(z.begin(), z.end()));
  rec.times.push_back(0.0);
  rec.energies.push_back(config.initial_energies);

  std::vector<double> drift(z.size());
  long n_steps = static_cast<long>(std::ceil(config.t_end / dt - 1e-12));
  for (long step = 0; step < n_steps; ++step) {
    double h = std::min(dt, config.t_end - t);
    if (h <= 0.0) break;
    auto w = sample_edge_noise(g, h, rng);
    for (std::size_t x = 0; x < z.size(); ++x)
      drift[x] = log_drift_site(model, cutoff, g, z, x);
    std::vector<double> znext = z;
    for (std::size_t x = 0; x < z.size(); ++x) znext[x] += drift[x] * h;
    for (std::size_t e = 0; e < g.n_edges(); ++e) {
      int x = g.edges[e][0], y = g.edges[e][1];
      // dB_{xy} = -dB_{yx}: one increment, site-dependent amplitudes.
      znext[x] += log_edge_beta(model, cutoff, z[x], z[y]) * w[e];
      znext[y] -= log_edge_beta(model, cutoff, z[y], z[x]) * w[e];
    }
    z = std::move(znext);
    t += h;
    double zmin = *std::min_element(z.begin(), z.end());
    min_seen = std::min(min_seen, std::exp(zmin));
    bool hit = config.delta_stop > 0.0 && std::exp(zmin) <= config.delta_stop;
    if ((step + 1) % config.record_stride == 0 || step + 1 == n_steps || hit) {
      std::vector<double> en(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) en[i] = std::exp(z[i]);
      rec.times.push_back(t);
      rec.energies.push_back(std::move(en));
    }
    if (hit) {
      rec.stopped = true;
      rec.stop_time = t;
      break;
    }
  }
  rec.min_energy_seen = min_seen;
  return rec;
}

}  // namespace elab
