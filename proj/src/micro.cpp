#include "energylab/micro.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elab {

namespace {

void validate(const MicroConfig& c) {
  if (!c.graph || !c.surface || !c.potential)
    throw std::invalid_argument("micro: graph, surface and potential are required");
  if (c.epsilon < 0.0) throw std::invalid_argument("micro: epsilon must be nonnegative");
  if (!(c.delta > 0.0) || !(c.delta < 1.0))
    throw std::invalid_argument("micro: delta must be in (0,1)");
  if (c.initial_energies.size() != c.graph->n_vertices)
    throw std::invalid_argument("micro: initial energies must match vertex count");
  for (double e : c.initial_energies)
    if (!(e > 0.0)) throw std::invalid_argument("micro: initial energies must be positive");
  if (!(c.h > 0.0)) throw std::invalid_argument("micro: step must be positive");
  if (c.epsilon == 0.0 && !(c.t_physical_end > 0.0))
    throw std::invalid_argument("micro: at epsilon = 0 a physical horizon is required");
}

double physical_horizon(const MicroConfig& c) {
  if (c.t_physical_end > 0.0) return c.t_physical_end;
  return c.t_slow_end / (c.epsilon * c.epsilon);
}

std::string digest_of(const MicroConfig& c) {
  std::ostringstream os;
  os << "micro|n=" << c.graph->n_vertices << "|eps=" << c.epsilon << "|delta=" << c.delta
     << "|h=" << c.h << "|t_slow=" << c.t_slow_end << "|t_phys=" << c.t_physical_end
     << "|seed=" << c.seed;
  for (double e : c.initial_energies) os << "|" << e;
  std::ostringstream hex;
  hex << std::hex << fnv1a(os.str());
  return hex.str();
}

// Time derivative of the full per-site state (xi in ambient matrix
// coordinates, z), per the modified equations. Writes into dxi/dz.
void derivative(const MicroConfig& c, const CutoffFamily& cut, const std::vector<Mat2>& xi,
                const std::vector<double>& z, std::vector<Mat2>& dxi,
                std::vector<double>& dz) {
  const InteractionGraph& g = *c.graph;
  const BumpPotential& pot = *c.potential;
  std::size_t n = g.n_vertices;
  const double eps = c.epsilon;

  // Per-site scalars of the product potential V = u(q_x) u(q_y).
  static thread_local std::vector<double> phi, uu, udot, uperp, w;
  phi.resize(n);
  uu.resize(n);
  udot.resize(n);
  uperp.resize(n);
  w.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    phi[x] = cut.phi(std::exp(z[x]));
    uu[x] = pot.u(xi[x]);
    if (eps != 0.0) {
      udot[x] = pot.u_dot(xi[x]);
      uperp[x] = pot.u_perp(xi[x]);
    } else {
      udot[x] = uperp[x] = 0.0;
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (int y : g.adjacency[x]) w[x] += phi[y] * uu[y];

  for (std::size_t x = 0; x < n; ++x) {
    double ex_half = std::exp(-0.5 * z[x]);
    // geodesic speed including the kinetic coupling correction
    double speed = cut.omega(z[x]) + 0.5 * eps * cut.zeta(z[x]) * uu[x] * w[x];
    // fiber rotation from the perpendicular component of the force
    double psi_dot = -(eps / std::sqrt(2.0)) * ex_half * phi[x] * uperp[x] * w[x];
    // dM = M * (speed * A + (psi_dot/2) * J), A = diag(1/2,-1/2)
    double a = 0.5 * speed, b = 0.5 * psi_dot;
    const Mat2& m = xi[x];
    dxi[x] = {m[0] * a + m[1] * b, -m[0] * b - m[1] * a,
              m[2] * a + m[3] * b, -m[2] * b - m[3] * a};
    dz[x] = -eps * std::sqrt(2.0) * ex_half * phi[x] * udot[x] * w[x];
  }
}

}  // namespace

MicroState micro_initial_state(const MicroConfig& config, RngStream& rng) {
  MicroState s;
  std::size_t n = config.graph->n_vertices;
  s.xi.reserve(n);
  for (std::size_t x = 0; x < n; ++x) s.xi.push_back(config.surface->sample_haar(rng));
  s.z.resize(n);
  for (std::size_t x = 0; x < n; ++x) s.z[x] = std::log(config.initial_energies[x]);
  return s;
}

double micro_hamiltonian(const MicroConfig& config, const CutoffFamily& cutoff,
                         const MicroState& s) {
  double H = 0.0;
  for (double z : s.z) H += cutoff.varphi(std::exp(z));
  for (const auto& e : config.graph->edges) {
    int x = e[0], y = e[1];
    H += config.epsilon * cutoff.phi(std::exp(s.z[x])) * cutoff.phi(std::exp(s.z[y])) *
         config.potential->pair(s.xi[x], s.xi[y]);
  }
  return H;
}

void micro_rk4_step(const MicroConfig& config, const CutoffFamily& cutoff, MicroState& s,
                    double h) {
  std::size_t n = s.z.size();
  static thread_local std::vector<Mat2> k1x, k2x, k3x, k4x, tx;
  static thread_local std::vector<double> k1z, k2z, k3z, k4z, tz;
  k1x.resize(n); k2x.resize(n); k3x.resize(n); k4x.resize(n); tx.resize(n);
  k1z.resize(n); k2z.resize(n); k3z.resize(n); k4z.resize(n); tz.resize(n);

  derivative(config, cutoff, s.xi, s.z, k1x, k1z);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) tx[i][j] = s.xi[i][j] + 0.5 * h * k1x[i][j];
    tz[i] = s.z[i] + 0.5 * h * k1z[i];
  }
  derivative(config, cutoff, tx, tz, k2x, k2z);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) tx[i][j] = s.xi[i][j] + 0.5 * h * k2x[i][j];
    tz[i] = s.z[i] + 0.5 * h * k2z[i];
  }
  derivative(config, cutoff, tx, tz, k3x, k3z);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) tx[i][j] = s.xi[i][j] + h * k3x[i][j];
    tz[i] = s.z[i] + h * k3z[i];
  }
  derivative(config, cutoff, tx, tz, k4x, k4z);

  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j)
      s.xi[i][j] += (h / 6.0) * (k1x[i][j] + 2.0 * k2x[i][j] + 2.0 * k3x[i][j] + k4x[i][j]);
    s.z[i] += (h / 6.0) * (k1z[i] + 2.0 * k2z[i] + 2.0 * k3z[i] + k4z[i]);
    s.xi[i] = mat_renormalize(s.xi[i]);
    if (std::abs(base_point_disk(s.xi[i])) > 0.75)
      s.xi[i] = config.surface->reduce(s.xi[i]);
  }
  s.time += h;
}

MicroRecord micro_simulate(const MicroConfig& config) {
  validate(config);
  CutoffFamily cutoff(config.delta);
  RngStream rng(config.seed, config.rng_purpose, config.rng_index);
  MicroState s = micro_initial_state(config, rng);

  double T = physical_horizon(config);
  long n_steps = static_cast<long>(std::ceil(T / config.h - 1e-12));
  long stride = std::max<long>(1, n_steps / std::max(1, config.record_samples));
  double slow_scale = config.epsilon > 0.0 ? config.epsilon * config.epsilon : 1.0;

  MicroRecord rec;
  rec.trajectory.seed = config.seed;
  rec.trajectory.config_digest = digest_of(config);

  auto record = [&](double t_phys) {
    std::vector<double> en(s.z.size());
    for (std::size_t i = 0; i < s.z.size(); ++i) en[i] = std::exp(s.z[i]);
    rec.trajectory.times.push_back(t_phys * slow_scale);
    rec.trajectory.energies.push_back(std::move(en));
  };
  record(0.0);

  double H0 = micro_hamiltonian(config, cutoff, s);
  double Hscale = std::max(std::abs(H0), 1e-30);
  double min_seen = *std::min_element(config.initial_energies.begin(),
                                      config.initial_energies.end());

  for (long step = 0; step < n_steps; ++step) {
    double h = std::min(config.h, T - s.time);
    if (h <= 0.0) break;
    micro_rk4_step(config, cutoff, s, h);
    for (std::size_t i = 0; i < s.z.size(); ++i) {
      if (!std::isfinite(s.z[i]))
        throw std::runtime_error("micro: non-finite log-energy; reduce the step size");
      min_seen = std::min(min_seen, std::exp(s.z[i]));
    }
    if ((step + 1) % stride == 0 || step + 1 == n_steps) {
      record(s.time);
      double H = micro_hamiltonian(config, cutoff, s);
      rec.hamiltonian_drift = std::max(rec.hamiltonian_drift, std::abs(H - H0) / Hscale);
      for (std::size_t i = 0; i < s.z.size(); ++i)
        rec.energy_drift = std::max(
            rec.energy_drift, std::abs(std::exp(s.z[i]) - config.initial_energies[i]));
    }
  }
  rec.trajectory.min_energy_seen = min_seen;
  return rec;
}

}  // namespace elab
