#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "infoperc/error.hpp"
#include "infoperc/mixing.hpp"

using namespace infoperc;

namespace {

double total(const DistributionTable& p) {
  double s = 0.0;
  for (double x : p.prob) s += x;
  return s;
}

DistributionTable flipped(const DistributionTable& p) {
  DistributionTable q = p;
  const std::size_t mask = (std::size_t{1} << p.sites) - 1;
  for (std::size_t i = 0; i < p.prob.size(); ++i) q.prob[i ^ mask] = p.prob[i];
  return q;
}

// Forward Kolmogorov equation integrated with classical Runge-Kutta on the
// full generator, an oracle independent of uniformization.
std::vector<double> rk4_law(const Graph& g, double beta, std::size_t start, double t, int steps) {
  const std::size_t n = g.size(), states = std::size_t{1} << n;
  auto deriv = [&](const std::vector<double>& p) {
    std::vector<double> d(states, 0.0);
    for (std::size_t x = 0; x < states; ++x)
      for (Vertex v = 0; v < n; ++v) {
        int s = 0;
        for (Vertex w : g.neighbors(v)) s += (x >> w) & 1u ? 1 : -1;
        const double plus = std::exp(beta * s) / (std::exp(beta * s) + std::exp(-beta * s));
        const bool up = (x >> v) & 1u;
        const double rate = up ? 1.0 - plus : plus;
        const std::size_t y = x ^ (std::size_t{1} << v);
        d[x] -= rate * p[x];
        d[y] += rate * p[x];
      }
    return d;
  };
  std::vector<double> p(states, 0.0);
  p[start] = 1.0;
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    auto k1 = deriv(p);
    std::vector<double> q(states);
    for (std::size_t i = 0; i < states; ++i) q[i] = p[i] + 0.5 * h * k1[i];
    auto k2 = deriv(q);
    for (std::size_t i = 0; i < states; ++i) q[i] = p[i] + 0.5 * h * k2[i];
    auto k3 = deriv(q);
    for (std::size_t i = 0; i < states; ++i) q[i] = p[i] + h * k3[i];
    auto k4 = deriv(q);
    for (std::size_t i = 0; i < states; ++i) p[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return p;
}

}  // namespace

TEST_CASE("exact stationary law") {
  const auto u = exact_stationary(build_cycle(5), 0.0);
  for (double p : u.prob) CHECK(p == doctest::Approx(1.0 / 32).epsilon(1e-14));
  const auto pi = exact_stationary(build_torus(3, 2), 0.4);
  CHECK(std::abs(total(pi) - 1.0) < 1e-12);
  const auto f = flipped(pi);
  for (std::size_t i = 0; i < pi.prob.size(); ++i) CHECK(f.prob[i] == pi.prob[i]);
  const auto cold = exact_stationary(build_cycle(3), 2.0);
  CHECK(cold.prob[0] + cold.prob[7] > 0.99);
  CHECK_THROWS_AS(exact_stationary(build_cycle(21), 0.1), CapacityError);
  // Large beta does not overflow.
  const auto frozen = exact_stationary(build_cycle(10), 400.0);
  CHECK(frozen.prob[0] == doctest::Approx(0.5));
}

TEST_CASE("exact transient law") {
  const auto g6 = build_cycle(6);
  const auto x0 = testing::random_config(6, 1);
  const auto p0 = exact_transient(g6, 0.2, x0, 0.0);
  CHECK(p0.prob[DistributionTable::index_of(x0)] == 1.0);

  const auto late = exact_transient(g6, 0.2, all_plus(6), 50.0);
  CHECK(tv_distance(late, exact_stationary(g6, 0.2)) < 1e-6);
  CHECK(late.truncation_error < 1e-10);

  for (double t : {0.1, 1.0, 3.0}) {
    const auto p = exact_transient(g6, 0.0, x0, t);
    double same = 0.0;
    for (std::size_t i = 0; i < p.prob.size(); ++i)
      if (((i >> 2) & 1u) == (x0[2] > 0 ? 1u : 0u)) same += p.prob[i];
    CHECK(std::abs(same - 0.5 * (1.0 + std::exp(-t))) < 1e-12);
    CHECK(std::abs(total(p) - 1.0) < 1e-10);
  }

  // Spin-flip symmetry.
  SpinConfig y0 = x0;
  for (auto& s : y0) s = Spin(-s);
  const auto a = exact_transient(build_cycle(5), 0.3, SpinConfig(x0.begin(), x0.begin() + 5), 1.3);
  const auto b = flipped(exact_transient(build_cycle(5), 0.3, SpinConfig(y0.begin(), y0.begin() + 5), 1.3));
  for (std::size_t i = 0; i < a.prob.size(); ++i) CHECK(a.prob[i] == doctest::Approx(b.prob[i]).epsilon(1e-12));

  // Independent oracle on a triangle.
  const auto g3 = build_cycle(3);
  const auto ref = rk4_law(g3, 0.5, 5, 1.2, 4000);
  const auto law = exact_transient(g3, 0.5, DistributionTable::config_of(5, 3), 1.2);
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(law.prob[i] - ref[i]) < 1e-10);

  CHECK_THROWS_AS(exact_transient(build_cycle(13), 0.1, all_plus(13), 1.0), CapacityError);
}

TEST_CASE("total variation distance") {
  DistributionTable p{2, {0.25, 0.25, 0.25, 0.25}, 0.0};
  DistributionTable q{2, {1.0, 0.0, 0.0, 0.0}, 0.0};
  DistributionTable r{2, {0.0, 0.0, 0.5, 0.5}, 0.0};
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(p, q) == doctest::Approx(0.75));
  CHECK(tv_distance(q, r) == 1.0);
  CHECK(tv_distance(p, q) == tv_distance(q, p));
  CHECK_THROWS_AS(tv_distance(p, DistributionTable{1, {0.5, 0.5}, 0.0}), InvalidArgument);
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> ex;
  auto random_table = [&] {
    DistributionTable t{3, std::vector<double>(8), 0.0};
    double s = 0.0;
    for (auto& x : t.prob) s += x = ex(rng);
    for (auto& x : t.prob) x /= s;
    return t;
  };
  for (int i = 0; i < 200; ++i) {
    const auto a = random_table(), b = random_table(), c = random_table();
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-15);
  }
}

TEST_CASE("exact profile") {
  const auto g = build_cycle(8);
  std::vector<double> times;
  for (double t = 0.0; t <= 6.0; t += 0.25) times.push_back(t);
  const auto prof = tv_profile(g, 0.2, times, ProfileMode::Exact);
  const auto pi = exact_stationary(g, 0.2);
  CHECK(prof.points[0].tv == doctest::Approx(1.0 - pi.prob.back()).epsilon(1e-14));
  for (std::size_t i = 0; i < prof.points.size(); ++i) {
    CHECK(prof.points[i].exact);
    CHECK(prof.points[i].std_error == 0.0);
    if (i > 0) CHECK(prof.points[i].tv <= prof.points[i - 1].tv + 1e-12);
  }
  CHECK_THROWS_AS(tv_profile(build_cycle(13), 0.2, times, ProfileMode::Exact), CapacityError);
}

TEST_CASE("statistical lower bounds stay below the exact distance") {
  const auto g = build_cycle(8);
  const double times[] = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  StatisticalOptions o;
  o.replicas = 3000;
  o.seed = 19;
  const auto exact = tv_profile(g, 0.2, times, ProfileMode::Exact);
  const auto stat = tv_profile(g, 0.2, times, ProfileMode::Statistical, o);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK_FALSE(stat.points[i].exact);
    CHECK(stat.points[i].tv <= exact.points[i].tv + 3.0 * stat.points[i].std_error);
    CHECK(stat.points[i].tv <= stat.points[i].plug_in + 1e-12);
    const auto lb = lower_bound_tv(g, 0.2, times[i], o);
    CHECK(lb.bound <= exact.points[i].tv + 3.0 * lb.std_error);
  }
}

TEST_CASE("lower bound at beta = 0") {
  const std::size_t n = 400;
  const auto g = build_cycle(n);
  StatisticalOptions o;
  o.replicas = 2000;
  o.seed = 4;
  const double t_m = 0.5 * std::log(double(n));
  const auto early = lower_bound_tv(g, 0.0, t_m - 2.0, o);
  CHECK(early.bound >= 0.9);
  CHECK(early.threshold == doctest::Approx(0.5 * n * std::exp(-(t_m - 2.0))).epsilon(0.05));
  const auto late = lower_bound_tv(g, 0.0, 20.0, o);
  CHECK(std::abs(late.bound) <= 3.0 * late.std_error + 1e-3);
  o.replicas = 50;
  CHECK_THROWS_AS(lower_bound_tv(g, 0.0, 1.0, o), InvalidArgument);
}

TEST_CASE("Miller-Peres inequality") {
  for (std::size_t k = 1; k <= 4; ++k) {
    const std::size_t subsets = std::size_t{1} << k;
    std::vector<std::vector<double>> laws(subsets);
    for (std::size_t r = 0; r < subsets; ++r) {
      laws[r].assign(std::size_t{1} << __builtin_popcountll(r), 0.0);
      laws[r][0] = 1.0;
    }
    std::vector<double> empty_only(subsets, 0.0);
    empty_only[0] = 1.0;
    const auto zero = mp_l2_evaluate(k, empty_only, laws);
    CHECK(zero.lhs == doctest::Approx(0.0));
    CHECK(zero.rhs == 0.0);
    std::vector<double> full_only(subsets, 0.0);
    full_only.back() = 1.0;
    const auto eq = mp_l2_evaluate(k, full_only, laws);
    CHECK(eq.lhs == double(subsets - 1));
    CHECK(eq.rhs == double(subsets - 1));
    CHECK(mp_l2_check(k, 200, 40 + k) == 0);
  }
  CHECK_THROWS_AS(mp_l2_check(5, 1, 1), InvalidArgument);
}

TEST_CASE("mixing time from a profile") {
  TvProfile p;
  p.points = {{0.0, 1.0}, {1.0, 0.8}, {2.0, 0.4}, {3.0, 0.1}};
  CHECK(t_mix_from_profile(p, 0.6) == doctest::Approx(1.5));
  CHECK(t_mix_from_profile(p, 0.25) == doctest::Approx(2.5));
  CHECK(t_mix_from_profile(p, 0.25) > t_mix_from_profile(p, 0.75));
  CHECK_THROWS_AS(t_mix_from_profile(p, 0.05), BudgetExceeded);
  CHECK_THROWS_AS(t_mix_from_profile(p, 1.0), InvalidArgument);
  TvProfile starts_low;
  starts_low.points = {{0.0, 0.2}, {1.0, 0.1}};
  CHECK_THROWS_AS(t_mix_from_profile(starts_low, 0.5), BudgetExceeded);
}

TEST_CASE("cutoff window scan at beta = 0") {
  CutoffOptions o;
  for (double d = -2.0; d <= 3.0; d += 0.25) o.offsets.push_back(d);
  o.stats.replicas = 1000;
  o.stats.seed = 8;
  o.tm.precision = 0.1;
  o.tm.seed = 8;
  const std::size_t sizes[] = {64, 256};
  const double eps[] = {0.25, 0.75};
  const auto rows = cutoff_window_scan(sizes, 0.0, eps, o);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.t_mix[0] > r.t_mix[1]);
    CHECK(std::abs(r.t_mix[0] - 0.5 * std::log(double(r.n))) < 3.0);
    CHECK(r.window(0.25) > 0.0);
  }
}
