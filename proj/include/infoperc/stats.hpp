#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace infoperc {

// Monte Carlo estimate of a mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;

  double lower(double z) const noexcept { return mean - z * std_error; }
  double upper(double z) const noexcept { return mean + z * std_error; }
};

// Recursive pairwise summation in index order; the result depends only on
// the values and their order, never on how they were produced.
double pairwise_sum(std::span<const double> values) noexcept;

Estimate estimate_mean(std::span<const double> samples);

// Sample covariance of paired samples with a delta-method standard error.
Estimate estimate_covariance(std::span<const double> x, std::span<const double> y);

struct TestResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

// Goodness of fit of counts to probabilities. Cells with expected count
// below `min_expected` are pooled into one cell.
TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                          double min_expected = 5.0);

// Asymptotic Kolmogorov survival function P(K > x).
double kolmogorov_sf(double x);

// One-sample Kolmogorov-Smirnov test against a continuous CDF.
TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// sup_x (F_upper(x) - F_lower(x)) over the pooled sample points; when
// lower is stochastically dominated by upper this is <= 0 up to noise.
double dominance_violation(std::vector<double> lower, std::vector<double> upper);

// One-sided two-sample KS critical value at significance alpha.
double dominance_critical(std::size_t n_lower, std::size_t n_upper, double alpha);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// Weighted least squares of y on x (weights = 1 / sigma^2; empty = unweighted).
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> sigma = {});

}  // namespace infoperc
