#include "infoperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "infoperc/error.hpp"

namespace infoperc {

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate estimate_mean(std::span<const double> samples) {
  if (samples.empty()) throw InvalidArgument("no samples");
  const double n = double(samples.size());
  const double mean = pairwise_sum(samples) / n;
  if (samples.size() < 2) return {mean, 0.0, samples.size()};
  std::vector<double> sq(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - mean) * (samples[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n), samples.size()};
}

Estimate estimate_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("covariance needs >= 2 paired samples");
  const double n = double(x.size());
  const double mx = pairwise_sum(x) / n, my = pairwise_sum(y) / n;
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  const Estimate raw = estimate_mean(prod);
  const double scale = n / (n - 1.0);
  return {raw.mean * scale, raw.std_error * scale, x.size()};
}

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0) return statistic > 0 ? 0.0 : 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(statistic, 0.0)));
}

TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                          double min_expected) {
  if (observed.size() != probs.size()) throw InvalidArgument("observed/probability size mismatch");
  double total = 0.0;
  for (auto c : observed) total += double(c);
  double stat = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * probs[i];
    if (e < min_expected) {
      pooled_obs += double(observed[i]);
      pooled_exp += e;
      continue;
    }
    stat += (double(observed[i]) - e) * (double(observed[i]) - e) / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  } else if (pooled_obs > 0.0) {
    return {std::numeric_limits<double>::infinity(), double(cells), 0.0};
  }
  const double dof = cells > 1 ? double(cells - 1) : 0.0;
  return {stat, dof, chi_square_sf(stat, dof)};
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("no samples");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
  }
  const double sn = std::sqrt(n);
  // Stephens' finite-sample correction.
  return {d, n, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)};
}

double dominance_violation(std::vector<double> lower, std::vector<double> upper) {
  if (lower.empty() || upper.empty()) throw InvalidArgument("no samples");
  std::sort(lower.begin(), lower.end());
  std::sort(upper.begin(), upper.end());
  const double nl = double(lower.size()), nu = double(upper.size());
  double worst = -1.0;
  std::size_t i = 0, j = 0;
  while (i < lower.size() || j < upper.size()) {
    double x;
    if (j >= upper.size() || (i < lower.size() && lower[i] <= upper[j])) x = lower[i];
    else x = upper[j];
    while (i < lower.size() && lower[i] <= x) ++i;
    while (j < upper.size() && upper[j] <= x) ++j;
    worst = std::max(worst, double(j) / nu - double(i) / nl);
  }
  return worst;
}

double dominance_critical(std::size_t n_lower, std::size_t n_upper, double alpha) {
  const double nl = double(n_lower), nu = double(n_upper);
  return std::sqrt(-std::log(alpha) / 2.0 * (nl + nu) / (nl * nu));
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit needs >= 2 points");
  if (!sigma.empty() && sigma.size() != x.size()) throw InvalidArgument("sigma size mismatch");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (det <= 0) throw InvalidArgument("degenerate abscissae");
  LinearFit fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / sw;
  if (!sigma.empty()) {
    fit.slope_stderr = std::sqrt(sw / det);
  } else if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / double(x.size() - 2) * sw / det);
  }
  return fit;
}

}  // namespace infoperc
