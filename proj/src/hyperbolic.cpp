#include "energylab/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace elab {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

double mat_det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

Mat2 mat_inverse(const Mat2& m) {
  double d = mat_det(m);
  return {m[3] / d, -m[1] / d, -m[2] / d, m[0] / d};
}

Mat2 mat_renormalize(const Mat2& m) {
  double d = mat_det(m);
  if (!(d > 0.0)) throw std::runtime_error("matrix determinant not positive");
  double s = 1.0 / std::sqrt(d);
  return {m[0] * s, m[1] * s, m[2] * s, m[3] * s};
}

Mat2 geodesic_step(const Mat2& m, double t) {
  double e = std::exp(0.5 * t);
  return {m[0] * e, m[1] / e, m[2] * e, m[3] / e};
}

Mat2 rotate_tangent(const Mat2& m, double psi) {
  double c = std::cos(0.5 * psi), s = std::sin(0.5 * psi);
  return mat_mul(m, Mat2{c, -s, s, c});
}

Mat2 theta_reverse(const Mat2& m) {
  // rotation by pi: right-multiply by R(pi/2) = [[0,-1],[1,0]]
  return {m[1], -m[0], m[3], -m[2]};
}

std::complex<double> base_point_halfplane(const Mat2& m) {
  double a = m[0], b = m[1], c = m[2], d = m[3];
  double den = c * c + d * d;
  return {(a * c + b * d) / den, mat_det(m) / den};
}

std::complex<double> base_point_disk(const Mat2& m) {
  std::complex<double> z = base_point_halfplane(m);
  const std::complex<double> i(0.0, 1.0);
  return (z - i) / (z + i);
}

HyperbolicSurface::HyperbolicSurface() {
  const double alpha = 1.0 + std::sqrt(2.0);
  const double r = std::sqrt(2.0 + 2.0 * std::sqrt(2.0));
  gens_.reserve(16);
  for (int k = 0; k < 8; ++k) {
    double p = r * std::cos(k * M_PI / 4.0);
    double q = r * std::sin(k * M_PI / 4.0);
    gens_.push_back(Mat2{alpha + p, -q, -q, alpha - p});
  }
  for (int k = 0; k < 8; ++k) gens_.push_back(mat_inverse(gens_[k]));
}

namespace {
double disk_abs(const Mat2& m) { return std::abs(base_point_disk(m)); }
}  // namespace

Mat2 HyperbolicSurface::reduce(const Mat2& m) const {
  // Inside this radius the point is certainly in the octagon (inscribed
  // circle of euclidean radius ~0.649).
  const double inner = 0.64;
  Mat2 cur = m;
  double best = disk_abs(cur);
  for (int iter = 0; iter < 200; ++iter) {
    if (best <= inner) return cur;
    // Pick the single generator move that brings the base point closest to
    // the origin this round.
    double found = best;
    Mat2 next = cur;
    for (const Mat2& g : gens_) {
      Mat2 cand = mat_mul(g, cur);
      double v = disk_abs(cand);
      if (v < found - 1e-15) {
        found = v;
        next = cand;
      }
    }
    if (found >= best - 1e-15) return cur;
    cur = next;
    best = found;
  }
  throw std::runtime_error("fundamental-domain reduction did not terminate");
}

bool HyperbolicSurface::in_domain(const Mat2& m) const {
  double v = disk_abs(m);
  if (v <= 0.64) return true;
  for (const Mat2& g : gens_)
    if (disk_abs(mat_mul(g, m)) < v - 1e-15) return false;
  return true;
}

double HyperbolicSurface::dist_to_center(const Mat2& m) const {
  double r = std::abs(base_point_disk(m));
  r = std::min(r, 1.0 - 1e-16);
  return std::log((1.0 + r) / (1.0 - r));
}

Mat2 HyperbolicSurface::sample_haar(RngStream& rng) const {
  // Base point: uniform w.r.t. hyperbolic area on the euclidean disk of
  // radius R0 (which contains the octagon, circumradius ~0.841), accepted
  // only if it falls inside the Dirichlet octagon.
  const double R0 = 0.85;
  for (int tries = 0; tries < 100000; ++tries) {
    double x, y;
    do {
      x = (2.0 * rng.uniform() - 1.0) * R0;
      y = (2.0 * rng.uniform() - 1.0) * R0;
    } while (x * x + y * y > R0 * R0);
    double rr = x * x + y * y;
    // hyperbolic area density relative to Lebesgue is 4/(1-|w|^2)^2
    double accept = std::pow((1.0 - R0 * R0) / (1.0 - rr), 2);
    if (rng.uniform() >= accept) continue;
    // Map disk point w to the upper half-plane and build the transport
    // matrix T = [[sqrt(v), u/sqrt(v)],[0, 1/sqrt(v)]] taking i to u+iv.
    std::complex<double> w(x, y);
    const std::complex<double> i(0.0, 1.0);
    std::complex<double> z = i * (1.0 + w) / (1.0 - w);
    double u = z.real(), v = z.imag();
    if (!(v > 0.0)) continue;
    double sv = std::sqrt(v);
    Mat2 T{sv, u / sv, 0.0, 1.0 / sv};
    if (!in_domain(T)) continue;
    double psi = 2.0 * M_PI * rng.uniform();
    return rotate_tangent(T, psi);
  }
  throw std::runtime_error("haar sampling failed");
}

Mat2 advance_fast(const HyperbolicSurface& surface, const Mat2& xi, double speed, double h) {
  return surface.reduce(mat_renormalize(geodesic_step(xi, speed * h)));
}

BumpPotential::BumpPotential(const HyperbolicSurface& surface, double r_c)
    : surface_(&surface), r_c_(r_c) {
  if (!(r_c > 0.0) || r_c >= surface.injectivity_radius())
    throw std::invalid_argument("potential radius must be in (0, injectivity radius)");
}

namespace {
double bump(double t) {
  double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t2));
}
}  // namespace

double BumpPotential::u(const Mat2& xi) const {
  return bump(surface_->dist_to_center(xi) / r_c_);
}

double BumpPotential::pair(const Mat2& xi_x, const Mat2& xi_y) const {
  return u(xi_x) * u(xi_y);
}

double BumpPotential::u_dot(const Mat2& xi) const {
  const double h = 1e-5;
  return (u(geodesic_step(xi, h)) - u(geodesic_step(xi, -h))) / (2.0 * h);
}

double BumpPotential::u_perp(const Mat2& xi) const {
  return u_dot(rotate_tangent(xi, 0.5 * M_PI));
}

double BumpPotential::coupling_current(const Mat2& xi_x, const Mat2& xi_y) const {
  return u_dot(xi_x) * u(xi_y);
}

}  // namespace elab
