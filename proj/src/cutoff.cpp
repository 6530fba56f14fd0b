#include "energylab/cutoff.hpp"

#include <cmath>
#include <stdexcept>

namespace elab {

namespace {
constexpr double kLn8 = 2.0794415416798357;  // ln 8

// Quintic bridge for h = ln(phi) on t = (u - u_lo)/ln8 in [0,1].
// Boundary data: h(0) = -ln8/2, h'(0) = 0.5*ln8 (in t), h''(0) = 0,
// h(1) = h'(1) = h''(1) = 0. With y0 = -ln8/2 this collapses to
//   h(t) = y0 * (1 - t - 4 t^3 + 7 t^4 - 3 t^5).
double bridge(double t) {
  return (-0.5 * kLn8) * (1.0 - t - 4.0 * t * t * t + 7.0 * t * t * t * t -
                          3.0 * t * t * t * t * t);
}
double bridge_dt(double t) {
  return (-0.5 * kLn8) *
         (-1.0 - 12.0 * t * t + 28.0 * t * t * t - 15.0 * t * t * t * t);
}
}  // namespace

CutoffFamily::CutoffFamily(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  u_hi_ = std::log(delta_);
  u_lo_ = u_hi_ - kLn8;

  // Tabulate varphi over the window by Simpson integration of e^{u - h(u)}.
  const int n = 512;  // even
  vgrid_u_.resize(n + 1);
  vgrid_val_.resize(n + 1);
  double du = (u_hi_ - u_lo_) / n;
  for (int i = 0; i <= n; ++i) vgrid_u_[i] = u_lo_ + i * du;
  // integrand of d varphi / d u = s / phi(s) = e^{u - h(u)}
  auto f = [&](double u) { return std::exp(u - h(u)); };
  // Cumulative Simpson on pairs of intervals, filling odd nodes by half-step
  // Simpson to keep the grid dense.
  vgrid_val_[n] = delta_;  // varphi(delta) = delta
  for (int i = n; i >= 2; i -= 2) {
    double a = vgrid_u_[i - 2], m = vgrid_u_[i - 1], b = vgrid_u_[i];
    double seg = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    vgrid_val_[i - 2] = vgrid_val_[i] - seg;
    double mm = 0.5 * (m + b);
    vgrid_val_[i - 1] = vgrid_val_[i] - (b - m) / 6.0 * (f(m) + 4.0 * f(mm) + f(b));
  }
  varphi_lo_offset_ = vgrid_val_[0] - 2.0 * std::sqrt(delta_ * (delta_ / 8.0));
}

double CutoffFamily::h(double u) const {
  return bridge((u - u_lo_) / kLn8);
}

double CutoffFamily::h_prime(double u) const {
  return bridge_dt((u - u_lo_) / kLn8) / kLn8;
}

double CutoffFamily::phi(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("phi: s must be positive");
  if (s >= delta_) return 1.0;
  if (s <= delta_ / 8.0) return std::sqrt(s / delta_);
  return std::exp(h(std::log(s)));
}

double CutoffFamily::phi_prime(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("phi_prime: s must be positive");
  if (s >= delta_) return 0.0;
  if (s <= delta_ / 8.0) return 0.5 / std::sqrt(s * delta_);
  double u = std::log(s);
  return h_prime(u) * std::exp(h(u)) / s;
}

double CutoffFamily::varphi(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("varphi: s must be positive");
  if (s >= delta_) return s;
  if (s <= delta_ / 8.0) return 2.0 * std::sqrt(delta_ * s) + varphi_lo_offset_;
  double u = std::log(s);
  double x = (u - u_lo_) / (u_hi_ - u_lo_) * (vgrid_u_.size() - 1);
  std::size_t i = static_cast<std::size_t>(x);
  if (i >= vgrid_u_.size() - 1) i = vgrid_u_.size() - 2;
  double w = x - i;
  return (1.0 - w) * vgrid_val_[i] + w * vgrid_val_[i + 1];
}

double CutoffFamily::omega(double z) const {
  return std::sqrt(2.0) * std::exp(0.5 * z) / phi(std::exp(z));
}

double CutoffFamily::zeta(double z) const {
  double s = std::exp(z);
  return std::sqrt(2.0) * std::exp(0.5 * z) * phi_prime(s);
}

}  // namespace elab
