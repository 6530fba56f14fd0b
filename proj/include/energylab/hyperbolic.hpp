#pragma once

#include <array>
#include <complex>
#include <vector>

#include "energylab/rng.hpp"

namespace elab {

// 2x2 real matrix, row-major. Elements of SL(2,R) represent points of the
// unit tangent bundle of the quotient surface: the base point is M acting on
// i in the upper half-plane, the fiber angle is carried by the rotation part.
using Mat2 = std::array<double, 4>;

Mat2 mat_mul(const Mat2& a, const Mat2& b);
double mat_det(const Mat2& m);
Mat2 mat_inverse(const Mat2& m);
// Rescale so det = 1 (assumes det > 0).
Mat2 mat_renormalize(const Mat2& m);

// Geodesic flow for time t at unit speed: right multiplication by
// diag(e^{t/2}, e^{-t/2}).
Mat2 geodesic_step(const Mat2& m, double t);

// Rotate the tangent direction by angle psi: right multiplication by the
// rotation matrix of angle psi/2. The same convention is used both for the
// perpendicular derivative of potentials and for the fiber-rotation term of
// the microscopic force, so the overall dynamics does not depend on the
// orientation choice.
Mat2 rotate_tangent(const Mat2& m, double psi);

// Velocity reversal (psi = pi).
Mat2 theta_reverse(const Mat2& m);

// Base point in the upper half-plane and in the Poincare disk.
std::complex<double> base_point_halfplane(const Mat2& m);
std::complex<double> base_point_disk(const Mat2& m);

// Genus-2 regular-octagon quotient. Side-pairing generators precomputed in
// double precision; the fundamental domain is the Dirichlet octagon about
// the base point i (origin of the disk model).
class HyperbolicSurface {
 public:
  HyperbolicSurface();

  // The 8 side-pairing generators and their inverses (16 total).
  const std::vector<Mat2>& generators() const { return gens_; }

  // Greedy reduction into the Dirichlet domain by left multiplication.
  // Throws if it fails to terminate within the iteration bound.
  Mat2 reduce(const Mat2& m) const;

  // True if the base point lies in the Dirichlet octagon (no generator
  // moves it closer to the origin).
  bool in_domain(const Mat2& m) const;

  // Hyperbolic distance from the base point of a reduced matrix to the
  // domain center. By the Dirichlet property this is the quotient distance.
  double dist_to_center(const Mat2& m) const;

  // Half the systole; balls of this radius around the center embed.
  double injectivity_radius() const { return 1.528; }

  // Uniform sample from the invariant volume of the unit tangent bundle:
  // hyperbolic-area rejection sampling of the base point in the Dirichlet
  // octagon, uniform fiber angle.
  Mat2 sample_haar(RngStream& rng) const;

 private:
  std::vector<Mat2> gens_;
};

// Geodesic flow at the given speed for time h, with determinant
// renormalization and fundamental-domain reduction.
Mat2 advance_fast(const HyperbolicSurface& surface, const Mat2& xi, double speed, double h);

// Smooth rotation-invariant bump potential u(q) = bump(d(q, center)/r_c)
// with bump(t) = exp(1 - 1/(1-t^2)); r_c below the injectivity radius so
// the support embeds. The pair potential is the product V = u(q_x) u(q_y).
class BumpPotential {
 public:
  BumpPotential(const HyperbolicSurface& surface, double r_c = 1.0);

  double u(const Mat2& xi) const;           // site factor
  double pair(const Mat2& xi_x, const Mat2& xi_y) const;  // V(q_x, q_y)

  // Derivative of u along the unit-speed geodesic flow (symmetric finite
  // difference, step 1e-5).
  double u_dot(const Mat2& xi) const;
  // Derivative of u in the direction perpendicular to the tangent vector,
  // realized as u_dot at the quarter-turned tangent.
  double u_perp(const Mat2& xi) const;

  // L_x V(xi_x, xi_y): derivative of the pair potential along the fast flow
  // in the x slot at unit speed.
  double coupling_current(const Mat2& xi_x, const Mat2& xi_y) const;

  double r_c() const { return r_c_; }

 private:
  const HyperbolicSurface* surface_;
  double r_c_;
};

}  // namespace elab
