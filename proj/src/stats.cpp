#include "energylab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elab {

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  r.n = xs.size();
  if (r.n == 0) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / r.n;
  if (r.n < 2) return r;
  double v = 0.0;
  for (double x : xs) v += (x - r.mean) * (x - r.mean);
  v /= (r.n - 1);
  r.stderr_ = std::sqrt(v / r.n);
  return r;
}

double gamma_p(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("gamma_p: a must be positive");
  if (x < 0.0) throw std::invalid_argument("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // series
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // continued fraction for Q
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

double gamma_cdf(double shape, double rate, double x) {
  if (x <= 0.0) return 0.0;
  return gamma_p(shape, rate * x);
}

double gamma_sample(RngStream& rng, double shape, double rate) {
  // Marsaglia-Tsang, with the shape<1 boost.
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(rng.uniform() + 1e-300, 1.0 / a);
    a += 1.0;
  }
  double d = a - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.gaussian();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x ||
        std::log(u + 1e-300) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return boost * d * v / rate;
  }
}

double ks_statistic_sorted(const std::vector<double>& sorted, const std::vector<double>& cdf_at) {
  std::size_t n = sorted.size();
  if (n == 0 || cdf_at.size() != n) throw std::invalid_argument("ks_statistic: bad input");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = cdf_at[i];
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_pvalue(double d, double n_eff) {
  if (n_eff <= 0.0) throw std::invalid_argument("ks_pvalue: n_eff must be positive");
  double sn = std::sqrt(n_eff);
  double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1.18) {
    // small-lambda branch: the alternating series converges too slowly, use
    // the theta-function dual of the Kolmogorov distribution instead
    if (lambda <= 0.0) return 1.0;
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      double m = (2.0 * k - 1.0) * M_PI / (2.0 * lambda);
      double term = std::exp(-0.5 * m * m);
      cdf += term;
      if (term < 1e-16) break;
    }
    cdf *= std::sqrt(2.0 * M_PI) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // consume every copy of the smaller value from both samples, so ties
    // move both empirical distribution functions together
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

double integrated_autocorrelation_time(const std::vector<double>& xs) {
  std::size_t n = xs.size();
  if (n < 4) return 0.5;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double c0 = 0.0;
  for (double x : xs) c0 += (x - mean) * (x - mean);
  c0 /= n;
  if (c0 <= 0.0) return 0.5;
  // Initial positive sequence on pairwise sums of autocovariances.
  double tau = 0.5;
  for (std::size_t k = 1; k + 1 < n; k += 2) {
    double ck = 0.0, ck1 = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) ck += (xs[i] - mean) * (xs[i + k] - mean);
    for (std::size_t i = 0; i + k + 1 < n; ++i) ck1 += (xs[i] - mean) * (xs[i + k + 1] - mean);
    ck /= n;
    ck1 /= n;
    double pair = (ck + ck1) / c0;
    if (pair <= 0.0) break;
    tau += pair;
    if (k > n / 4) break;
  }
  return tau;
}

std::pair<double, double> wilson_ci95(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_ci95: no trials");
  const double z = 1.959963984540054;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double denom = 1.0 + z * z / n;
  double center = (p + z * z / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace elab
