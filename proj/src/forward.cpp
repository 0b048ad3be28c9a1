#include "infoperc/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoperc/error.hpp"
#include "infoperc/parallel.hpp"
#include "infoperc/rng.hpp"

namespace infoperc {

namespace {

void apply(SpinConfig& state, const UpdateEvent& e, const UpdateRule& rule, const Graph& g) {
  int sigma = 0;
  for (Vertex w : g.neighbors(e.site)) sigma += state[w];
  state[e.site] = rule.resolve(e.site, e.u, sigma);
}

void check_sizes(const SpinConfig& x0, const UpdateSequence& seq, const Graph& g) {
  if (x0.size() != g.size() || seq.sites() != g.size())
    throw InvalidArgument("configuration, sequence and graph sizes differ",
                          {{"config", double(x0.size())},
                           {"sequence", double(seq.sites())},
                           {"graph", double(g.size())}});
}

void check_monte_carlo(const Graph& g, const MonteCarloOptions& opts, std::size_t min_replicas = 1) {
  if (opts.replicas < min_replicas)
    throw InvalidArgument("too few replicas", {{"replicas", double(opts.replicas)}});
  if (opts.origin >= g.size()) throw InvalidArgument("origin out of range");
}

}  // namespace

void run_forward_observed(SpinConfig& state, const UpdateSequence& seq, const UpdateRule& rule,
                          const Graph& g, std::span<const double> times,
                          const std::function<void(std::size_t, const SpinConfig&)>& observe) {
  check_sizes(state, seq, g);
  if (!std::is_sorted(times.begin(), times.end())) throw InvalidArgument("observation times must be sorted");
  const auto events = seq.merged();
  std::size_t next = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    while (next < events.size() && events[next].time <= times[i]) apply(state, events[next++], rule, g);
    observe(i, state);
  }
  while (next < events.size()) apply(state, events[next++], rule, g);
}

SpinConfig run_forward(const SpinConfig& x0, const UpdateSequence& seq, double beta, const Graph& g) {
  check_sizes(x0, seq, g);
  const UpdateRule rule(beta, g);
  SpinConfig state = x0;
  for (const auto& e : seq.merged()) apply(state, e, rule, g);
  return state;
}

MagnetizationCurve estimate_magnetization(const Graph& g, double beta, std::span<const double> times,
                                          const MonteCarloOptions& opts) {
  check_monte_carlo(g, opts);
  if (times.empty()) throw InvalidArgument("no observation times");
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0) throw InvalidArgument("observation times must be nonnegative");
  const UpdateRule rule(beta, g);
  const double horizon = sorted.back();
  const std::size_t n = g.size();

  auto per_replica = run_replicas(
      opts.replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, horizon, derive_seed(opts.seed, stream::kReplica, r));
        SpinConfig state = all_plus(n);
        std::vector<double> values(sorted.size());
        run_forward_observed(state, seq, rule, g, sorted, [&](std::size_t i, const SpinConfig& x) {
          values[i] = opts.average_sites ? double(spin_sum(x)) / double(n) : double(x[opts.origin]);
        });
        return values;
      },
      opts.workers);

  MagnetizationCurve curve;
  curve.site_averaged = opts.average_sites;
  curve.seed = opts.seed;
  std::vector<double> column(opts.replicas);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t r = 0; r < opts.replicas; ++r) column[r] = per_replica[r][i];
    const auto est = estimate_mean(column);
    curve.points.push_back({sorted[i], est.mean, est.std_error, opts.replicas});
  }
  return curve;
}

namespace {

// First abscissa at which values fall to `level`, linearly interpolated;
// nullopt if they never do on the grid.
std::optional<double> first_crossing(std::span<const double> grid, std::span<const double> values,
                                     double level) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] <= level) {
      if (i == 0) return grid[0];
      const double a = values[i - 1], b = values[i];
      const double frac = a == b ? 0.0 : (a - level) / (a - b);
      return grid[i - 1] + frac * (grid[i] - grid[i - 1]);
    }
  }
  return std::nullopt;
}

}  // namespace

TmEstimate find_t_m(const Graph& g, double beta, const TmOptions& opts) {
  if (!(opts.precision > 0.0)) throw InvalidArgument("precision must be positive");
  if (opts.initial_replicas < 2) throw InvalidArgument("need at least 2 initial replicas");
  const std::size_t n = g.size();
  const double target = 1.0 / std::sqrt(double(n));
  const double bd = beta * double(g.max_degree());
  const double lower = 0.5 * std::log(double(n));
  double upper = bd < 0.9 ? lower / (1.0 - bd) : 4.0 * lower;
  const double margin = std::max(0.05, opts.precision);
  const double step = opts.precision / 8.0;
  const UpdateRule rule(beta, g);

  for (;;) {
    const double t0 = std::max(0.0, lower - margin), t1 = upper + margin;
    const std::size_t points = std::size_t(std::ceil((t1 - t0) / step)) + 1;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) grid[i] = t0 + (t1 - t0) * double(i) / double(points - 1);

    std::vector<double> sum(points, 0.0), sum_sq(points, 0.0);
    std::size_t done = 0;
    std::size_t batch = opts.initial_replicas;
    TmEstimate est;
    est.site_averaged = opts.average_sites;
    bool bracketed = false;
    while (done + batch <= opts.replica_budget) {
      auto rows = run_replicas(
          batch,
          [&](std::size_t k) {
            const auto seq = generate(n, t1, derive_seed(opts.seed, stream::kReplica, done + k));
            SpinConfig state = all_plus(n);
            std::vector<double> values(points);
            run_forward_observed(state, seq, rule, g, grid, [&](std::size_t i, const SpinConfig& x) {
              values[i] = opts.average_sites ? double(spin_sum(x)) / double(n) : double(x[0]);
            });
            return values;
          },
          opts.workers);
      std::vector<double> column(batch), column_sq(batch);
      for (std::size_t i = 0; i < points; ++i) {
        for (std::size_t k = 0; k < batch; ++k) {
          column[k] = rows[k][i];
          column_sq[k] = rows[k][i] * rows[k][i];
        }
        sum[i] += pairwise_sum(column);
        sum_sq[i] += pairwise_sum(column_sq);
      }
      done += batch;
      batch = done;

      std::vector<double> mean(points), lo_band(points), hi_band(points);
      const double r = double(done);
      for (std::size_t i = 0; i < points; ++i) {
        mean[i] = sum[i] / r;
        const double var = std::max(0.0, (sum_sq[i] - r * mean[i] * mean[i]) / (r - 1.0));
        const double se = std::sqrt(var / r);
        lo_band[i] = mean[i] - opts.z * se;
        hi_band[i] = mean[i] + opts.z * se;
      }
      const auto centre = first_crossing(grid, mean, target);
      const auto early = first_crossing(grid, lo_band, target);
      const auto late = first_crossing(grid, hi_band, target);
      bracketed = centre.has_value();
      est.t_m = centre.value_or(t1);
      est.ci_low = early.value_or(t1);
      est.ci_high = late.value_or(t1);
      est.replicas = done;
      if (!bracketed) break;
      if (late && est.ci_high - est.ci_low < opts.precision) return est;
    }
    if (!bracketed && upper < 64.0 * lower + 64.0) {
      upper *= 2.0;  // only reachable when beta d is not small
      continue;
    }
    throw BudgetExceeded("replica budget exhausted before t_m was resolved",
                         {{"t_m", est.t_m},
                          {"ci_low", est.ci_low},
                          {"ci_high", est.ci_high},
                          {"replicas", double(est.replicas)}});
  }
}

Estimate grand_coupling_disagreement(const Graph& g, double beta, double t, const MonteCarloOptions& opts) {
  check_monte_carlo(g, opts);
  if (!(t >= 0.0)) throw InvalidArgument("time must be nonnegative");
  const UpdateRule rule(beta, g);
  const std::size_t n = g.size();
  auto samples = run_replicas(
      opts.replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, t, derive_seed(opts.seed, stream::kReplica, r));
        SpinConfig plus = all_plus(n), minus = all_minus(n);
        for (const auto& e : seq.merged()) {
          apply(plus, e, rule, g);
          apply(minus, e, rule, g);
        }
        if (!opts.average_sites) return plus[opts.origin] != minus[opts.origin] ? 1.0 : 0.0;
        std::size_t differ = 0;
        for (std::size_t v = 0; v < n; ++v) differ += plus[v] != minus[v];
        return double(differ) / double(n);
      },
      opts.workers);
  return estimate_mean(samples);
}

Estimate covariance_sum(const Graph& g, double beta, double t, Vertex v, const SpinConfig& x0,
                        const MonteCarloOptions& opts) {
  check_monte_carlo(g, opts, 2);
  if (v >= g.size()) throw InvalidArgument("vertex out of range");
  if (x0.size() != g.size()) throw InvalidArgument("initial configuration has wrong size");
  if (!(t >= 0.0)) throw InvalidArgument("time must be nonnegative");
  const UpdateRule rule(beta, g);
  const std::size_t n = g.size();
  struct Sample {
    double total = 0.0, at_v = 0.0;
  };
  auto samples = run_replicas(
      opts.replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, t, derive_seed(opts.seed, stream::kReplica, r));
        SpinConfig state = x0;
        for (const auto& e : seq.merged()) apply(state, e, rule, g);
        return Sample{double(spin_sum(state)), double(state[v])};
      },
      opts.workers);
  std::vector<double> total(samples.size()), at_v(samples.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    total[r] = samples[r].total;
    at_v[r] = samples[r].at_v;
  }
  return estimate_covariance(total, at_v);
}

}  // namespace infoperc
