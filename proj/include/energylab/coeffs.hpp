#pragma once

#include <string>
#include <utility>
#include <vector>

namespace elab {

// Sampled correlation curve tau -> Gamma(tau). Grid must be strictly
// increasing, values nonnegative.
struct GammaTable {
  std::vector<double> tau;
  std::vector<double> gamma;
  std::vector<double> stderr_;  // optional, may be empty
};

struct DriftInequalityReport {
  bool pass = false;
  double min_gap = 0.0;  // min over grid of drift*Ex - beta_sq
  std::size_t n_checked = 0;
};

// The correlation coefficients of the mesoscopic energy equation.
//
// Everything is derived from the single-variable curve Gamma via
//   rho(a,b)      = Gamma(a/b) / b
//   rho_tilde     = -(a/b) rho(a,b)
//   beta_sq(x,y)  = Ex * rho(sqrt(2Ex), sqrt(2Ey))
//   drift         = (d/dEx - d/dEy) beta_sq + (d-2)/2 (1/Ex - 1/Ey) beta_sq
// so homogeneity of rho holds by construction in both modes.
//
// Analytic mode uses Gamma(t) = A/(1+t^3) with exact derivatives. Empirical
// mode interpolates a measured table (linear in ln tau), extrapolates the
// right tail as Gamma(tau_max)*(tau_max/tau)^3 and the left tail as
// Gamma(tau_min), and differentiates beta_sq by central differences in log
// energy.
class CoefficientModel {
 public:
  enum class Kind { Analytic, Empirical };

  static CoefficientModel analytic(double A = 1.0, int d = 3);
  static CoefficientModel empirical(GammaTable table, int d = 3);
  static CoefficientModel empirical_from_csv(const std::string& path, int d = 3);

  Kind kind() const { return kind_; }
  double A() const { return A_; }
  int dim() const { return d_; }
  const GammaTable& table() const { return table_; }
  double tail_fit_residual() const { return tail_residual_; }

  double gamma(double tau) const;
  double gamma_prime(double tau) const;  // analytic mode only
  double rho(double a, double b) const;
  double rho_tilde(double a, double b) const;
  double beta_sq(double Ex, double Ey) const;
  double g_factor(double Ex, double Ey) const;
  double drift(double Ex, double Ey) const;

  // Scan of the inequality drift*Ex >= beta_sq on pairs with Ey > M*Ex.
  // Requires d >= 3 and M >= max(1, (d-1)/(d-2)) for the model (B = 0);
  // pairs violating the precondition are skipped.
  DriftInequalityReport check_drift_inequality(
      double M, const std::vector<std::pair<double, double>>& grid) const;

 private:
  CoefficientModel() = default;

  Kind kind_ = Kind::Analytic;
  double A_ = 1.0;
  int d_ = 3;
  GammaTable table_;
  double tail_residual_ = 0.0;
};

GammaTable load_gamma_csv(const std::string& path);
void save_gamma_csv(const std::string& path, const GammaTable& t, const std::string& header_note);

}  // namespace elab
