#include <doctest.h>

#include <cmath>

#include "energylab/cutoff.hpp"

using namespace elab;

TEST_CASE("phi takes its exact regimes outside the window") {
  for (double delta : {0.1, 0.01, 0.001}) {
    CutoffFamily c(delta);
    CHECK(c.phi(delta) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.phi(5.0 * delta) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.phi(delta / 8.0) == doctest::Approx(std::sqrt(1.0 / 8.0)).epsilon(1e-12));
    CHECK(c.phi(delta / 100.0) == doctest::Approx(std::sqrt(1.0 / 100.0)).epsilon(1e-12));
    CHECK(c.phi_prime(2.0 * delta) == doctest::Approx(0.0).epsilon(1e-15));
    double s = delta / 50.0;
    CHECK(c.phi_prime(s) ==
          doctest::Approx(0.5 / std::sqrt(s * delta)).epsilon(1e-10));
  }
}

TEST_CASE("phi is monotone and C1 across the window") {
  CutoffFamily c(0.01);
  double prev = 0.0;
  for (int k = 0; k <= 400; ++k) {
    double s = 0.01 / 8.0 * std::pow(8.0, k / 400.0);  // spans the window
    double v = c.phi(s);
    CHECK(v >= prev - 1e-14);
    prev = v;
    // finite-difference consistency of phi_prime
    double h = 1e-7 * s;
    double fd = (c.phi(s + h) - c.phi(s - h)) / (2.0 * h);
    CHECK(c.phi_prime(s) == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("omega and zeta regimes and bounds") {
  double delta = 0.01;
  CutoffFamily c(delta);
  double z_hi = std::log(delta);
  // above the window: free values, zeta vanishes
  CHECK(c.omega(z_hi + 2.0) == doctest::Approx(std::sqrt(2.0) * std::exp((z_hi + 2.0) / 2.0))
                                   .epsilon(1e-12));
  CHECK(c.zeta(z_hi + 2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.zeta(z_hi) == doctest::Approx(0.0).epsilon(1e-12));
  // below the window: both saturate
  double z_lo = std::log(delta / 8.0);
  CHECK(c.omega(z_lo - 3.0) == doctest::Approx(std::sqrt(2.0 * delta)).epsilon(1e-12));
  CHECK(c.zeta(z_lo - 3.0) == doctest::Approx(1.0 / std::sqrt(2.0 * delta)).epsilon(1e-12));
  // global bounds on a dense grid through the window
  for (int k = 0; k <= 500; ++k) {
    double z = z_lo - 1.0 + (3.0 + (z_hi - z_lo)) * k / 500.0;
    CHECK(c.omega(z) >= std::sqrt(delta) * (1.0 - 1e-12));
    CHECK(c.zeta(z) >= -1e-12);
    // defining relations against phi
    double s = std::exp(z);
    CHECK(c.omega(z) ==
          doctest::Approx(std::sqrt(2.0) * std::exp(z / 2.0) / c.phi(s)).epsilon(1e-9));
    CHECK(c.zeta(z) ==
          doctest::Approx(std::sqrt(2.0) * std::exp(z / 2.0) * c.phi_prime(s)).epsilon(1e-6));
  }
}

TEST_CASE("varphi is the anchored antiderivative of 1/phi") {
  double delta = 0.01;
  CutoffFamily c(delta);
  // free region: identity
  CHECK(c.varphi(delta) == doctest::Approx(delta).epsilon(1e-13));
  CHECK(c.varphi(0.7) == doctest::Approx(0.7).epsilon(1e-13));
  // low region: 2 sqrt(delta s) + const, so derivative is 1/phi there too
  for (int k = 0; k <= 300; ++k) {
    double s = delta / 200.0 * std::pow(400.0, k / 300.0);  // spans low, window, free
    double h = 1e-6 * s;
    double fd = (c.varphi(s + h) - c.varphi(s - h)) / (2.0 * h);
    // inside the window varphi comes from a tabulated quadrature, so allow
    // its interpolation error on top of the finite difference
    CHECK(fd == doctest::Approx(1.0 / c.phi(s)).epsilon(5e-3));
  }
  // continuity at the regime boundaries
  double sb = delta / 8.0;
  CHECK(c.varphi(sb * (1.0 - 1e-9)) == doctest::Approx(c.varphi(sb * (1.0 + 1e-9))).epsilon(1e-6));
  // below the cutoff 1/phi > 1, so the anchored antiderivative runs below
  // the identity while staying strictly increasing
  CHECK(c.varphi(delta / 100.0) < delta / 100.0);
  double prev = c.varphi(delta / 300.0);
  for (int k = 1; k <= 100; ++k) {
    double s = delta / 300.0 * std::pow(600.0, k / 100.0);
    double v = c.varphi(s);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("invalid delta rejected") {
  CHECK_THROWS(CutoffFamily(0.0));
  CHECK_THROWS(CutoffFamily(-0.1));
  CHECK_THROWS(CutoffFamily(1.5));
}
