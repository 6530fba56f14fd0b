#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "energylab/rng.hpp"
#include "energylab/stats.hpp"

using namespace elab;

TEST_CASE("mean_stderr basics") {
  auto r = mean_stderr({1.0, 2.0, 3.0, 4.0});
  CHECK(r.mean == doctest::Approx(2.5));
  CHECK(r.n == 4);
  // sample sd of {1..4} is sqrt(5/3); stderr = sd / 2
  CHECK(r.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("gamma cdf against closed forms") {
  // shape 1, rate lambda: exponential law
  for (double x : {0.1, 0.5, 2.0})
    CHECK(gamma_cdf(1.0, 2.0, x) == doctest::Approx(1.0 - std::exp(-2.0 * x)).epsilon(1e-10));
  // shape 1/2, rate 1: P(1/2, x) = erf(sqrt(x))
  for (double x : {0.2, 1.0, 3.0})
    CHECK(gamma_cdf(0.5, 1.0, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-10));
  // median bracketing for shape 3/2 (invariant marginal shape at d = 3)
  CHECK(gamma_cdf(1.5, 1.0, 1.5) < 0.65);
  CHECK(gamma_cdf(1.5, 1.0, 1.5) > 0.4);
  CHECK(gamma_cdf(1.5, 1.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("gamma sampler matches its cdf") {
  RngStream rng(99, "test-gamma");
  const double shape = 1.5, rate = 2.0;
  const std::size_t n = 20000;
  std::vector<double> xs(n);
  double sum = 0.0, sumsq = 0.0;
  for (auto& x : xs) {
    x = gamma_sample(rng, shape, rate);
    CHECK(x > 0.0);
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  // moments: mean = shape/rate, var = shape/rate^2; allow 5 sigma
  CHECK(std::abs(mean - shape / rate) < 5.0 * std::sqrt(shape / (rate * rate) / n));
  CHECK(var == doctest::Approx(shape / (rate * rate)).epsilon(0.08));
  // KS against the cdf
  std::sort(xs.begin(), xs.end());
  std::vector<double> cdf(n);
  for (std::size_t i = 0; i < n; ++i) cdf[i] = gamma_cdf(shape, rate, xs[i]);
  double d = ks_statistic_sorted(xs, cdf);
  CHECK(ks_pvalue(d, static_cast<double>(n)) > 1e-3);
}

TEST_CASE("ks pvalue endpoints") {
  CHECK(ks_pvalue(0.0, 1000.0) == doctest::Approx(1.0));
  CHECK(ks_pvalue(0.5, 1000.0) < 1e-6);
  // critical distance near 1.358/sqrt(n) sits near p = 0.05
  double p = ks_pvalue(1.358 / std::sqrt(500.0), 500.0);
  CHECK(p > 0.02);
  CHECK(p < 0.10);
}

TEST_CASE("two sample ks distance") {
  std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
  CHECK(ks_two_sample(a, a) == doctest::Approx(0.0));
  std::vector<double> b = {10.0, 11.0, 12.0};
  CHECK(ks_two_sample(a, b) == doctest::Approx(1.0));
  std::vector<double> c = {1.5, 2.5, 3.5, 4.5};
  CHECK(ks_two_sample(a, c) == doctest::Approx(0.25));
}

TEST_CASE("integrated autocorrelation time: iid vs AR(1)") {
  RngStream rng(7, "test-iat");
  std::size_t n = 50000;
  std::vector<double> iid(n);
  for (auto& x : iid) x = rng.gaussian();
  double tau_iid = integrated_autocorrelation_time(iid);
  CHECK(tau_iid == doctest::Approx(0.5).epsilon(0.15));

  // AR(1) with phi = 0.9: tau = (1 + phi) / (2 (1 - phi)) = 9.5
  std::vector<double> ar(n);
  double x = 0.0;
  for (auto& v : ar) {
    x = 0.9 * x + rng.gaussian();
    v = x;
  }
  double tau_ar = integrated_autocorrelation_time(ar);
  CHECK(tau_ar == doctest::Approx(9.5).epsilon(0.35));
}

TEST_CASE("wilson interval") {
  auto [lo, hi] = wilson_ci95(50, 100);
  CHECK(lo > 0.39);
  CHECK(hi < 0.61);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  auto [lo0, hi0] = wilson_ci95(0, 100);
  CHECK(lo0 == doctest::Approx(0.0));
  CHECK(hi0 > 0.0);
  CHECK(hi0 < 0.06);
  auto [lo1, hi1] = wilson_ci95(100, 100);
  CHECK(hi1 == doctest::Approx(1.0));
  CHECK(lo1 > 0.94);
}
