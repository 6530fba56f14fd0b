#include "energylab/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace elab {

CoefficientModel CoefficientModel::analytic(double A, int d) {
  if (A <= 0.0) throw std::invalid_argument("A must be positive");
  if (d < 2) throw std::invalid_argument("manifold dimension must be >= 2");
  CoefficientModel m;
  m.kind_ = Kind::Analytic;
  m.A_ = A;
  m.d_ = d;
  return m;
}

CoefficientModel CoefficientModel::empirical(GammaTable table, int d) {
  if (d < 2) throw std::invalid_argument("manifold dimension must be >= 2");
  if (table.tau.size() < 2 || table.tau.size() != table.gamma.size())
    throw std::invalid_argument("gamma table needs >= 2 (tau,gamma) rows");
  for (std::size_t i = 0; i < table.tau.size(); ++i) {
    if (table.tau[i] <= 0.0) throw std::invalid_argument("tau grid must be positive");
    if (i > 0 && table.tau[i] <= table.tau[i - 1])
      throw std::invalid_argument("tau grid must be strictly increasing");
    if (table.gamma[i] < 0.0) throw std::invalid_argument("gamma values must be nonnegative");
  }
  CoefficientModel m;
  m.kind_ = Kind::Empirical;
  m.d_ = d;
  m.table_ = std::move(table);

  // Fit A from the large-tau tail: A ~ tau^3 * Gamma(tau) on the upper
  // quarter of the grid. Residual is the relative spread around the fit.
  const auto& t = m.table_;
  std::size_t n = t.tau.size();
  std::size_t lo = (3 * n) / 4;
  double sum = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = lo; i < n; ++i) {
    sum += t.gamma[i] * (1.0 + t.tau[i] * t.tau[i] * t.tau[i]);
    ++cnt;
  }
  m.A_ = sum / static_cast<double>(cnt);
  if (m.A_ <= 0.0) throw std::invalid_argument("tail fit gave nonpositive A");
  double res = 0.0;
  for (std::size_t i = lo; i < n; ++i) {
    double v = t.gamma[i] * (1.0 + t.tau[i] * t.tau[i] * t.tau[i]);
    res = std::max(res, std::abs(v - m.A_) / m.A_);
  }
  m.tail_residual_ = res;
  return m;
}

CoefficientModel CoefficientModel::empirical_from_csv(const std::string& path, int d) {
  return empirical(load_gamma_csv(path), d);
}

double CoefficientModel::gamma(double tau) const {
  if (tau < 0.0) throw std::invalid_argument("gamma: tau must be nonnegative");
  if (kind_ == Kind::Analytic) return A_ / (1.0 + tau * tau * tau);
  const auto& t = table_;
  if (tau <= t.tau.front()) return t.gamma.front();
  if (tau >= t.tau.back()) {
    double r = t.tau.back() / tau;
    return t.gamma.back() * r * r * r;
  }
  auto it = std::upper_bound(t.tau.begin(), t.tau.end(), tau);
  std::size_t i = static_cast<std::size_t>(it - t.tau.begin());
  double u0 = std::log(t.tau[i - 1]), u1 = std::log(t.tau[i]);
  double w = (std::log(tau) - u0) / (u1 - u0);
  return (1.0 - w) * t.gamma[i - 1] + w * t.gamma[i];
}

double CoefficientModel::gamma_prime(double tau) const {
  if (tau < 0.0) throw std::invalid_argument("gamma_prime: tau must be nonnegative");
  if (kind_ != Kind::Analytic)
    throw std::logic_error("gamma_prime: analytic mode only; empirical mode differentiates beta_sq");
  double den = 1.0 + tau * tau * tau;
  return -3.0 * A_ * tau * tau / (den * den);
}

double CoefficientModel::rho(double a, double b) const {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("rho: arguments must be positive");
  return gamma(a / b) / b;
}

double CoefficientModel::rho_tilde(double a, double b) const {
  return -(a / b) * rho(a, b);
}

double CoefficientModel::beta_sq(double Ex, double Ey) const {
  if (Ex <= 0.0 || Ey <= 0.0) throw std::invalid_argument("beta_sq: energies must be positive");
  double f = Ex * rho(std::sqrt(2.0 * Ex), std::sqrt(2.0 * Ey));
  if (kind_ == Kind::Analytic) return f;
  // The exact coefficient is symmetric; an interpolated table satisfies the
  // reflection identity behind that symmetry only at its nodes, so
  // symmetrize explicitly. This also makes the finite-difference drift
  // vanish identically on the diagonal.
  double g = Ey * rho(std::sqrt(2.0 * Ey), std::sqrt(2.0 * Ex));
  return 0.5 * (f + g);
}

double CoefficientModel::g_factor(double Ex, double Ey) const {
  if (Ex <= 0.0 || Ey <= 0.0) throw std::invalid_argument("g_factor: energies must be positive");
  return beta_sq(Ex, Ey) / (Ex * Ey);
}

double CoefficientModel::drift(double Ex, double Ey) const {
  if (Ex <= 0.0 || Ey <= 0.0) throw std::invalid_argument("drift: energies must be positive");
  double dEx_b2, dEy_b2, b2;
  if (kind_ == Kind::Analytic) {
    // beta_sq = Ex * Gamma(tau) / sqrt(2 Ey), tau = sqrt(Ex/Ey).
    double tau = std::sqrt(Ex / Ey);
    double g = gamma(tau), gp = gamma_prime(tau);
    double s = std::sqrt(2.0 * Ey);
    b2 = Ex * g / s;
    dEx_b2 = (g + 0.5 * tau * gp) / s;
    dEy_b2 = -(Ex / (2.0 * Ey * s)) * (tau * gp + g);
  } else {
    // Central differences in log energy, step 1e-4 in ln E.
    const double h = 1e-4;
    b2 = beta_sq(Ex, Ey);
    dEx_b2 = (beta_sq(Ex * std::exp(h), Ey) - beta_sq(Ex * std::exp(-h), Ey)) / (2.0 * h * Ex);
    dEy_b2 = (beta_sq(Ex, Ey * std::exp(h)) - beta_sq(Ex, Ey * std::exp(-h))) / (2.0 * h * Ey);
  }
  return dEx_b2 - dEy_b2 + 0.5 * (d_ - 2) * (1.0 / Ex - 1.0 / Ey) * b2;
}

DriftInequalityReport CoefficientModel::check_drift_inequality(
    double M, const std::vector<std::pair<double, double>>& grid) const {
  if (d_ <= 2)
    throw std::invalid_argument("drift inequality is only claimed for d >= 3");
  double M_min = std::max(1.0, static_cast<double>(d_ - 1) / static_cast<double>(d_ - 2));
  if (M < M_min) throw std::invalid_argument("M below admissible threshold");
  DriftInequalityReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (auto [Ex, Ey] : grid) {
    if (!(Ey > M * Ex)) continue;  // precondition filter
    double gap = drift(Ex, Ey) * Ex - beta_sq(Ex, Ey);
    rep.min_gap = std::min(rep.min_gap, gap);
    ++rep.n_checked;
  }
  rep.pass = rep.n_checked > 0 && rep.min_gap >= -1e-12;
  return rep;
}

GammaTable load_gamma_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gamma table: " + path);
  GammaTable t;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // "tau,gamma" or "tau,gamma,stderr"
      if (line.rfind("tau,", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<double> row;
    while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
    if (row.size() < 2) throw std::runtime_error("bad gamma table row: " + line);
    t.tau.push_back(row[0]);
    t.gamma.push_back(row[1]);
    if (row.size() >= 3) t.stderr_.push_back(row[2]);
  }
  return t;
}

void save_gamma_csv(const std::string& path, const GammaTable& t, const std::string& header_note) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write gamma table: " + path);
  if (!header_note.empty()) out << "# " << header_note << "\n";
  out << (t.stderr_.empty() ? "tau,gamma" : "tau,gamma,stderr") << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < t.tau.size(); ++i) {
    out << t.tau[i] << "," << t.gamma[i];
    if (!t.stderr_.empty()) out << "," << t.stderr_[i];
    out << "\n";
  }
}

}  // namespace elab
