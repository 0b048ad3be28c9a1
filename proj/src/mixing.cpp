#include "infoperc/mixing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "infoperc/error.hpp"
#include "infoperc/history.hpp"
#include "infoperc/parallel.hpp"
#include "infoperc/rng.hpp"

namespace infoperc {

namespace {

constexpr double kPoissonTail = 1e-12;

int local_field(const Graph& g, std::size_t x, Vertex v) {
  int s = 0;
  for (Vertex w : g.neighbors(v)) s += (x >> w) & 1u ? 1 : -1;
  return s;
}

void check_same_index(const DistributionTable& p, const DistributionTable& q) {
  if (p.sites != q.sites || p.prob.size() != q.prob.size())
    throw InvalidArgument("distribution tables over different index sets",
                          {{"sites_p", double(p.sites)}, {"sites_q", double(q.sites)}});
}

// Histogram of spin sums shifted to [0, 2n].
std::vector<std::size_t> sum_histogram(std::span<const long> sums, std::size_t n) {
  std::vector<std::size_t> h(2 * n + 1, 0);
  for (long s : sums) ++h.at(std::size_t(s + long(n)));
  return h;
}

struct SumComparison {
  double envelope = 0.0;
  double plug_in = 0.0;
};

SumComparison compare_sums(std::span<const long> a, std::span<const long> b, std::size_t n) {
  const auto ha = sum_histogram(a, n);
  const auto hb = sum_histogram(b, n);
  const double ra = double(a.size()), rb = double(b.size());
  SumComparison out;
  double ta = 0.0, tb = 0.0;
  for (std::size_t k = ha.size(); k-- > 0;) {
    ta += double(ha[k]);
    tb += double(hb[k]);
    out.envelope = std::max(out.envelope, std::abs(ta / ra - tb / rb));
    out.plug_in += std::abs(double(ha[k]) / ra - double(hb[k]) / rb);
  }
  out.plug_in *= 0.5;
  return out;
}

std::size_t stationary_count(const StatisticalOptions& opts) {
  return opts.stationary_samples == 0 ? opts.replicas : opts.stationary_samples;
}

// Spin sums of all-plus forward runs at each of the sorted times.
std::vector<std::vector<long>> forward_sums(const Graph& g, double beta, std::span<const double> times,
                                            const StatisticalOptions& opts) {
  const std::size_t n = g.size();
  const UpdateRule rule(beta, g);
  const double horizon = std::max(times.back(), 1e-9);
  return run_replicas(
      opts.replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, horizon, derive_seed(opts.seed, stream::kReplica, r));
        SpinConfig state = all_plus(n);
        std::vector<long> sums(times.size());
        run_forward_observed(state, seq, rule, g, times,
                             [&](std::size_t i, const SpinConfig& x) { sums[i] = spin_sum(x); });
        return sums;
      },
      opts.workers);
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw InvalidArgument("empty time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i]))
      throw InvalidArgument("times must be finite and nonnegative", {{"time", times[i]}});
    if (i > 0 && times[i] < times[i - 1]) throw InvalidArgument("times must be sorted");
  }
}

}  // namespace

std::size_t DistributionTable::index_of(const SpinConfig& x) {
  if (x.size() > 63) throw CapacityError("configuration too large to index", {{"sites", double(x.size())}});
  std::size_t idx = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0) idx |= std::size_t{1} << i;
  return idx;
}

SpinConfig DistributionTable::config_of(std::size_t index, std::size_t sites) {
  SpinConfig x(sites);
  for (std::size_t i = 0; i < sites; ++i) x[i] = (index >> i) & 1u ? Spin{1} : Spin{-1};
  return x;
}

DistributionTable exact_stationary(const Graph& g, double beta) {
  const std::size_t n = g.size();
  if (n > kStationaryMaxSites)
    throw CapacityError("exact stationary law limited to 20 sites", {{"sites", double(n)}});
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be finite and >= 0");
  const auto edges = g.edges();
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> logw(states);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < states; ++x) {
    long e = 0;
    for (const auto& [a, b] : edges) e += (((x >> a) ^ (x >> b)) & 1u) ? -1 : 1;
    logw[x] = beta * double(e);
    top = std::max(top, logw[x]);
  }
  DistributionTable out{n, std::vector<double>(states), 0.0};
  for (std::size_t x = 0; x < states; ++x) out.prob[x] = std::exp(logw[x] - top);
  const double z = pairwise_sum(out.prob);
  for (auto& p : out.prob) p /= z;
  return out;
}

DistributionTable exact_transient(const Graph& g, double beta, const SpinConfig& x0, double t) {
  const std::size_t n = g.size();
  if (n > kTransientMaxSites)
    throw CapacityError("exact transient law limited to 12 sites", {{"sites", double(n)}});
  if (x0.size() != n) throw InvalidArgument("initial configuration has wrong size");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("t must be finite and >= 0", {{"t", t}});
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be finite and >= 0");
  const std::size_t states = std::size_t{1} << n;
  DistributionTable out{n, std::vector<double>(states, 0.0), 0.0};
  std::vector<double> p(states, 0.0);
  p[DistributionTable::index_of(x0)] = 1.0;
  if (t == 0.0) {
    out.prob = p;
    return out;
  }

  // Plus-probability of every (configuration, site) pair.
  std::vector<double> plus(states * n);
  for (std::size_t x = 0; x < states; ++x)
    for (Vertex v = 0; v < n; ++v)
      plus[x * n + v] = 0.5 * (1.0 + std::tanh(beta * double(local_field(g, x, v))));

  // Uniformization at rate n: one step picks a uniform site and resamples it.
  const double lambda = double(n) * t;
  std::size_t k_max = std::size_t(std::ceil(lambda));
  while (boost::math::gamma_p(double(k_max + 1), lambda) >= kPoissonTail) ++k_max;
  out.truncation_error = boost::math::gamma_p(double(k_max + 1), lambda);

  std::vector<double> next(states);
  const double inv_n = 1.0 / double(n);
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double w = std::exp(-lambda + double(k) * std::log(lambda) - std::lgamma(double(k) + 1.0));
    for (std::size_t x = 0; x < states; ++x) out.prob[x] += w * p[x];
    if (k == k_max) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < states; ++x) {
      if (p[x] == 0.0) continue;
      const double px = p[x] * inv_n;
      for (Vertex v = 0; v < n; ++v) {
        const std::size_t bit = std::size_t{1} << v;
        const double q = plus[x * n + v];
        next[x | bit] += px * q;
        next[x & ~bit] += px * (1.0 - q);
      }
    }
    p.swap(next);
  }
  return out;
}

double tv_distance(const DistributionTable& p, const DistributionTable& q) {
  check_same_index(p, q);
  std::vector<double> diff(p.prob.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(p.prob[i] - q.prob[i]);
  return std::clamp(0.5 * pairwise_sum(diff), 0.0, 1.0);
}

DistributionTable empirical_distribution(std::span<const SpinConfig> samples) {
  if (samples.empty()) throw InvalidArgument("no samples");
  const std::size_t n = samples.front().size();
  if (n > kStationaryMaxSites) throw CapacityError("empirical table limited to 20 sites", {{"sites", double(n)}});
  DistributionTable out{n, std::vector<double>(std::size_t{1} << n, 0.0), 0.0};
  for (const auto& x : samples) {
    if (x.size() != n) throw InvalidArgument("samples of different sizes");
    out.prob[DistributionTable::index_of(x)] += 1.0;
  }
  for (auto& p : out.prob) p /= double(samples.size());
  return out;
}

std::vector<long> stationary_spin_sums(const Graph& g, double beta, const StatisticalOptions& opts) {
  PerfectSampleOptions po;
  po.horizon_step = opts.perfect_step;
  return run_replicas(
      stationary_count(opts),
      [&](std::size_t k) {
        return spin_sum(perfect_sample(g, beta, derive_seed(opts.seed, stream::kPerfectSample, k), po));
      },
      opts.workers);
}

TvProfile tv_profile(const Graph& g, double beta, std::span<const double> times, ProfileMode mode,
                     const StatisticalOptions& opts) {
  check_times(times);
  TvProfile out;
  if (mode == ProfileMode::Exact) {
    if (g.size() > kTransientMaxSites)
      throw CapacityError("exact profile limited to 12 sites", {{"sites", double(g.size())}});
    const auto pi = exact_stationary(g, beta);
    for (double t : times) {
      const auto law = exact_transient(g, beta, all_plus(g.size()), t);
      out.points.push_back({t, tv_distance(law, pi), 0.0, 0.0, true});
    }
    return out;
  }
  if (opts.replicas < 2 || stationary_count(opts) < 2)
    throw InvalidArgument("statistical profile needs at least two samples on each side");
  const auto forward = forward_sums(g, beta, times, opts);
  const auto stationary = stationary_spin_sums(g, beta, opts);
  const double scale = std::sqrt(1.0 / double(opts.replicas) + 1.0 / double(stationary.size()));
  std::vector<long> column(forward.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t r = 0; r < forward.size(); ++r) column[r] = forward[r][i];
    const auto c = compare_sums(column, stationary, g.size());
    out.points.push_back({times[i], c.envelope, scale, c.plug_in, false});
  }
  return out;
}

LowerBound lower_bound_tv(const Graph& g, double beta, double t, const StatisticalOptions& opts) {
  if (opts.replicas < 100) throw InvalidArgument("lower bound needs at least 100 replicas");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("t must be finite and >= 0", {{"t", t}});
  const double times[1] = {t};
  const auto forward = forward_sums(g, beta, times, opts);
  const auto stationary = stationary_spin_sums(g, beta, opts);
  std::vector<double> y(forward.size());
  for (std::size_t r = 0; r < forward.size(); ++r) y[r] = double(forward[r][0]);
  LowerBound out;
  out.threshold = 0.5 * estimate_mean(y).mean;
  std::size_t above_y = 0, above_s = 0;
  for (double v : y) above_y += v >= out.threshold;
  for (long v : stationary) above_s += double(v) >= out.threshold;
  const double p1 = double(above_y) / double(y.size());
  const double p2 = double(above_s) / double(stationary.size());
  out.bound = p1 - p2;
  out.std_error = std::sqrt(p1 * (1.0 - p1) / double(y.size()) + p2 * (1.0 - p2) / double(stationary.size()));
  return out;
}

MpInstance mp_l2_evaluate(std::size_t sites, std::span<const double> subset_weights,
                          std::span<const std::vector<double>> spin_laws) {
  if (sites == 0 || sites > 4) throw InvalidArgument("Miller-Peres check needs 1 <= |V| <= 4");
  const std::size_t subsets = std::size_t{1} << sites;
  if (subset_weights.size() != subsets || spin_laws.size() != subsets)
    throw InvalidArgument("one weight and one spin law per subset required");
  const std::size_t states = subsets;
  std::vector<double> mu(states, 0.0);
  for (std::size_t r = 0; r < subsets; ++r) {
    const auto size_r = std::size_t(std::popcount(r));
    if (spin_laws[r].size() != (std::size_t{1} << size_r))
      throw InvalidArgument("spin law has wrong size for its subset");
    const double uniform_rest = std::ldexp(1.0, -int(sites - size_r));
    for (std::size_t x = 0; x < states; ++x) {
      // Restriction of x to R, packed in increasing site order.
      std::size_t packed = 0, j = 0;
      for (std::size_t i = 0; i < sites; ++i)
        if ((r >> i) & 1u) packed |= ((x >> i) & 1u) << j++;
      mu[x] += subset_weights[r] * spin_laws[r][packed] * uniform_rest;
    }
  }
  MpInstance out;
  double sq = 0.0;
  for (double m : mu) sq += m * m;
  out.lhs = double(states) * sq - 1.0;
  double pairs = 0.0;
  for (std::size_t r = 0; r < subsets; ++r)
    for (std::size_t s = 0; s < subsets; ++s)
      pairs += subset_weights[r] * subset_weights[s] * std::ldexp(1.0, std::popcount(r & s));
  out.rhs = pairs - 1.0;
  return out;
}

std::size_t mp_l2_check(std::size_t sites, std::size_t trials, std::uint64_t seed) {
  if (sites == 0 || sites > 4) throw InvalidArgument("Miller-Peres check needs 1 <= |V| <= 4");
  const std::size_t subsets = std::size_t{1} << sites;
  std::size_t violations = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(derive_seed(seed, stream::kReplica, trial));
    // Dirichlet weights with a random concentration, so that both spread-out
    // and nearly degenerate mixtures occur.
    std::gamma_distribution<double> conc_dist(1.0, 1.0);
    auto dirichlet = [&](std::size_t k) {
      std::gamma_distribution<double> gd(0.05 + conc_dist(rng), 1.0);
      std::vector<double> w(k);
      double total = 0.0;
      for (auto& x : w) total += x = gd(rng);
      if (total == 0.0) {
        w.assign(k, 0.0);
        w[0] = 1.0;
        return w;
      }
      for (auto& x : w) x /= total;
      return w;
    };
    const auto weights = dirichlet(subsets);
    std::vector<std::vector<double>> laws(subsets);
    for (std::size_t r = 0; r < subsets; ++r) laws[r] = dirichlet(std::size_t{1} << std::popcount(r));
    const auto inst = mp_l2_evaluate(sites, weights, laws);
    if (inst.lhs > inst.rhs + 1e-12 * std::max(1.0, std::abs(inst.rhs))) ++violations;
  }
  return violations;
}

double t_mix_from_profile(const TvProfile& profile, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0,1)", {{"eps", eps}});
  const auto& pts = profile.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].tv > eps) continue;
    if (i == 0) break;
    const auto& a = pts[i - 1];
    const auto& b = pts[i];
    if (a.tv == b.tv) return b.time;
    return a.time + (a.tv - eps) * (b.time - a.time) / (a.tv - b.tv);
  }
  throw BudgetExceeded("profile does not bracket eps",
                       {{"eps", eps},
                        {"first_tv", pts.empty() ? 0.0 : pts.front().tv},
                        {"last_tv", pts.empty() ? 0.0 : pts.back().tv}});
}

double CutoffRow::window(double e) const {
  auto at = [&](double level) {
    for (std::size_t i = 0; i < eps.size(); ++i)
      if (std::abs(eps[i] - level) < 1e-12) return t_mix[i];
    throw InvalidArgument("level not scanned", {{"eps", level}});
  };
  return at(e) - at(1.0 - e);
}

std::vector<CutoffRow> cutoff_window_scan(std::span<const std::size_t> sizes, double beta,
                                          std::span<const double> eps, const CutoffOptions& opts) {
  if (opts.offsets.empty()) throw InvalidArgument("empty offset grid");
  std::vector<CutoffRow> rows;
  for (std::size_t n : sizes) {
    const Graph g = build_cycle(n);
    CutoffRow row;
    row.n = n;
    TmOptions tm = opts.tm;
    tm.seed = derive_seed(opts.tm.seed, stream::kAuxiliary, n);
    row.t_m = find_t_m(g, beta, tm).t_m;
    std::vector<double> times;
    for (double o : opts.offsets) times.push_back(std::max(0.0, row.t_m + o));
    std::sort(times.begin(), times.end());
    StatisticalOptions so = opts.stats;
    so.seed = derive_seed(opts.stats.seed, stream::kAuxiliary, n);
    row.profile = tv_profile(g, beta, times, ProfileMode::Statistical, so);
    for (double e : eps) {
      row.eps.push_back(e);
      row.t_mix.push_back(t_mix_from_profile(row.profile, e));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace infoperc
