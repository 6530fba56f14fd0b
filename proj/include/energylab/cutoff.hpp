#pragma once

#include <vector>

namespace elab {

// Low-energy cutoff family. Outside the matching window (delta/8, delta) the
// functions take their two fixed regimes:
//   phi(s)   = 1 for s >= delta,      sqrt(s/delta) for s <= delta/8
//   omega(z) = sqrt(2) e^{z/2} for z >= ln delta, sqrt(2 delta) below the window
//   zeta(z)  = 0 for z >= ln delta,   1/sqrt(2 delta) below the window
// with omega = sqrt(2) e^{z/2} / phi(e^z) and zeta = sqrt(2) e^{z/2} phi'(e^z).
//
// The window is bridged by a quintic in ln(phi) as a function of ln(s),
// matching value and first two derivatives at both ends. This keeps phi
// monotone and C^2; the derived zeta is nonnegative and vanishes above the
// window but is not monotone inside it (no C^2 bridge of the two exact
// regimes has a monotone zeta, since the mean slope over the window equals
// the left boundary slope).
class CutoffFamily {
 public:
  explicit CutoffFamily(double delta);

  double delta() const { return delta_; }

  double phi(double s) const;        // in (0, 1]
  double phi_prime(double s) const;  // d phi / d s
  double varphi(double s) const;     // kinetic modification, antiderivative of 1/phi
  double omega(double z) const;      // >= sqrt(delta)
  double zeta(double z) const;       // >= 0

 private:
  // h(u) = ln phi at u = ln s on the window, plus derivatives.
  double h(double u) const;
  double h_prime(double u) const;

  double delta_;
  double u_lo_, u_hi_;  // ln(delta/8), ln(delta)
  // Precomputed varphi values on a fine window grid (varphi has no closed
  // form inside the window).
  std::vector<double> vgrid_u_;
  std::vector<double> vgrid_val_;
  double varphi_lo_offset_;  // varphi(s) = 2 sqrt(delta s) + offset below the window
};

}  // namespace elab
