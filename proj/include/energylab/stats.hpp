#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "energylab/rng.hpp"

namespace elab {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

MeanStderr mean_stderr(const std::vector<double>& xs);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// CDF of Gamma(shape, rate) at x.
double gamma_cdf(double shape, double rate, double x);

// Draw from Gamma(shape, rate).
double gamma_sample(RngStream& rng, double shape, double rate);

// One-sample Kolmogorov-Smirnov statistic against a CDF given as callable
// values at the sorted sample points.
double ks_statistic_sorted(const std::vector<double>& sorted, const std::vector<double>& cdf_at);

// Asymptotic KS p-value for statistic d with effective sample size n
// (Stephens' small-sample correction).
double ks_pvalue(double d, double n_eff);

// Two-sample KS distance between empirical laws.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Integrated autocorrelation time by the initial-positive-sequence
// truncation; returns tau such that ESS = n / (2 tau) approximately.
// tau >= 0.5; for iid data tau ~ 0.5.
double integrated_autocorrelation_time(const std::vector<double>& xs);

// Wilson 95% score interval for a binomial proportion.
std::pair<double, double> wilson_ci95(std::size_t successes, std::size_t trials);

}  // namespace elab
