#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "infoperc/clusters.hpp"
#include "infoperc/error.hpp"
#include "infoperc/forward.hpp"
#include "infoperc/stats.hpp"

using namespace infoperc;

namespace {

std::string describe_clusters(const std::vector<Cluster>& cs) {
  std::ostringstream os;
  char buf[64];
  for (const auto& c : cs) {
    os << "roots=";
    for (std::size_t i = 0; i < c.roots.size(); ++i) os << (i ? "," : "") << c.roots[i];
    std::snprintf(buf, sizeof buf, "%.17g", c.stats.length);
    os << " color=" << to_string(c.color) << " W=" << c.stats.steiner_width << " chi=" << c.stats.chi
       << " length=" << buf << " survives=" << c.stats.survives << '\n';
  }
  return os.str();
}

void check_partition(const std::vector<Cluster>& cs, std::size_t n) {
  std::vector<int> hits(n, 0);
  for (const auto& c : cs)
    for (Vertex v : c.roots) ++hits[v];
  for (int h : hits) CHECK(h == 1);
  for (std::size_t i = 1; i < cs.size(); ++i) CHECK(cs[i - 1].roots.front() < cs[i].roots.front());
}

}  // namespace

TEST_CASE("clusters at beta = 0 and with no updates") {
  const auto g = build_cycle(20);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto cs = build_clusters(g, generate(20, 2.0, s), 0.0);
    CHECK(cs.size() == 20);
    for (const auto& c : cs) {
      CHECK(c.roots.size() == 1);
      CHECK(c.stats.chi == 0);
      CHECK((c.color == Color::Blue || c.color == Color::Red));
    }
  }
  const auto empty = build_clusters(g, generate(20, 0.0, 1), 0.4);
  CHECK(empty.size() == 20);
  for (const auto& c : empty) {
    CHECK(c.stats.survives);
    CHECK(c.color == Color::Red);
  }
}

TEST_CASE("cluster structure invariants") {
  const auto g = build_cycle(40);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto seq = generate(40, 3.0, s);
    const auto cs = build_clusters(g, seq, 0.25);
    check_partition(cs, 40);
    double total = 0.0;
    for (const auto& c : cs) {
      CHECK(c.stats.chi == 2 * c.history.branch_count());
      CHECK(c.stats.length == doctest::Approx(c.history.length()));
      CHECK(c.color == classify(c, seq, 0.25, g));
      if (c.color == Color::Blue) {
        CHECK(c.roots.size() == 1);
        CHECK_FALSE(c.stats.survives);
      }
      if (c.color == Color::Red) {
        CHECK(c.stats.survives);
        CHECK(c.stats.chi + 1 >= c.stats.steiner_width);
      }
      total += c.stats.length;
    }
    // Lengths add up over disjoint clusters.
    const auto joint = develop_history(VertexSet::all(40), seq, 0.25, g, 1e7);
    CHECK(total == doctest::Approx(joint.length()));
  }
}

TEST_CASE("colors agree with dependence on the initial configuration") {
  const auto g = build_torus(5, 2);
  const double beta = 0.2;
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto seq = generate(25, 2.0, s);
    const auto cs = build_clusters(g, seq, beta);
    for (const auto& c : cs) {
      const auto plus = reconstruct(c.history, seq, beta, g, all_plus(25));
      const auto minus = reconstruct(c.history, seq, beta, g, all_minus(25));
      CHECK((c.color == Color::Red) == (plus != minus));
      for (std::uint64_t k = 0; k < 4; ++k) {
        const auto x = reconstruct(c.history, seq, beta, g, testing::random_config(25, s * 10 + k));
        const auto y = reconstruct(c.history, seq, beta, g, testing::random_config(25, s * 10 + k + 5));
        if (x != y) CHECK(c.color == Color::Red);
        // Monotonicity: every start lies between the two extremes.
        for (std::size_t i = 0; i < x.size(); ++i) {
          CHECK(minus[i] <= x[i]);
          CHECK(x[i] <= plus[i]);
        }
      }
    }
  }
}

TEST_CASE("a surviving cluster can be Green") {
  // Exhaustive search over three-event sequences on C_4 with marks on a grid.
  const auto g = build_cycle(4);
  const double beta = 0.4;
  const double times[] = {1.0, 2.0, 2.5};
  const double marks[] = {0.05, 0.3, 0.55, 0.8, 0.95};
  std::size_t found = 0;
  for (int code = 0; code < 64 * 125; ++code) {
    std::vector<std::vector<UpdateEvent>> lists(4);
    int c = code;
    std::vector<UpdateEvent> evs;
    for (double t : times) {
      const auto site = Vertex(c % 4);
      c /= 4;
      evs.push_back({site, t, 0.0});
    }
    for (auto& e : evs) {
      e.u = marks[c % 5];
      c /= 5;
      lists[e.site].push_back(e);
    }
    const UpdateSequence seq(4, 3.0, 0, lists);
    for (const auto& cl : build_clusters(g, seq, beta)) {
      if (!(cl.stats.survives && cl.color == Color::Green)) continue;
      ++found;
      CHECK(reconstruct(cl.history, seq, beta, g, all_plus(4)) ==
            reconstruct(cl.history, seq, beta, g, all_minus(4)));
    }
  }
  CHECK(found > 0);
}

TEST_CASE("golden clusters on C_32") {
  const auto g = build_cycle(32);
  const auto text = describe_clusters(build_clusters(g, generate(32, 3.0, 20240611), 0.2));
  const std::string path = std::string(INFOPERC_GOLDEN_DIR) + "/clusters_c32_b0.2_t3.txt";
  if (std::getenv("INFOPERC_UPDATE_GOLDEN")) {
    std::ofstream(path) << text;
  }
  std::ifstream is(path);
  REQUIRE(is.good());
  std::stringstream expected;
  expected << is.rdbuf();
  CHECK(text == expected.str());
}

TEST_CASE("red vertices at beta = 0 are binomial") {
  const auto g = build_cycle(30);
  const double t = 1.0, p = std::exp(-t);
  std::vector<std::uint64_t> counts(31, 0);
  const std::size_t reps = 4000;
  for (std::uint64_t s = 0; s < reps; ++s) {
    const auto red = red_vertices(build_clusters(g, generate(30, t, s), 0.0), 30);
    std::size_t k = 0;
    for (auto r : red) k += r;
    ++counts[k];
  }
  std::vector<double> probs(31);
  for (int k = 0; k <= 30; ++k)
    probs[k] = std::exp(std::lgamma(31.0) - std::lgamma(k + 1.0) - std::lgamma(31.0 - k) + k * std::log(p) +
                        (30 - k) * std::log1p(-p));
  CHECK(chi_square_gof(counts, probs).p_value > 1e-3);
}

TEST_CASE("red intersection moment edge cases") {
  ClusterMonteCarlo o;
  o.replicas = 200;
  o.seed = 2;
  const auto g = build_cycle(12);
  CHECK(red_intersection_moment(g, 0.0, 0.0, o).mean == 4096.0);
  CHECK_THROWS_AS(red_intersection_moment(build_cycle(30), 0.0, 0.0, o), InvalidArgument);
  const auto late = red_intersection_moment(g, 0.0, 3.0 * std::log(12.0), o);
  CHECK(late.mean < 1.05);
  CHECK(late.mean >= 1.0);
}

TEST_CASE("red probability of small sets") {
  ClusterMonteCarlo o;
  o.replicas = 20000;
  o.seed = 6;
  const auto g = build_cycle(16);
  const auto single = estimate_red_prob(g, 0.0, 1.5, {4}, o);
  CHECK(std::abs(single.mean - std::exp(-1.5)) <= 3.0 * single.std_error);
  o.replicas = 2000;
  CHECK(estimate_red_prob(g, 0.3, 0.05, {0, 8}, o).mean == 0.0);
}

TEST_CASE("red probability decays with the Steiner width") {
  ClusterMonteCarlo o;
  o.replicas = 200000;
  o.seed = 31;
  o.rule = ClusterRule::CycleWalk;
  const auto g = build_cycle(64);
  std::vector<double> k, logp, se;
  for (Vertex w = 2; w <= 4; ++w) {
    std::vector<Vertex> ids;
    for (Vertex v = 0; v < w; ++v) ids.push_back(v);
    const auto e = estimate_red_prob(g, 0.3, 1.0, VertexSet(ids), o);
    REQUIRE(e.mean > 0.0);
    k.push_back(double(w));
    logp.push_back(std::log(e.mean));
    se.push_back(e.std_error / e.mean);
  }
  const auto fit = fit_line(k, logp, se);
  CHECK(fit.slope < 0.0);
  CHECK(fit.slope + 3.0 * fit.slope_stderr < 0.0);
}

TEST_CASE("drift margin") {
  // Reference values evaluated with 30-digit arithmetic.
  CHECK(drift_margin(0.0, 2, 0.5, 0.1, 1.0) == doctest::Approx(-0.132120558828557678).epsilon(1e-14));
  CHECK(drift_margin(0.05, 2, 0.5, 0.1, 1.0) == doctest::Approx(0.730718631957888912).epsilon(1e-13));
  CHECK(drift_margin(0.0, 2, 0.5, 0.1, 60.0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(drift_margin(0.1, 2, 1.2, 0.1, 1.0), InvalidArgument);
  const auto a = smallest_feasible_alpha(1.0, 2, 0.5, 0.1);
  REQUIRE(a.has_value());
  CHECK(*a == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK_FALSE(smallest_feasible_alpha(1.0 - std::tanh(0.2), 2, 0.5, 0.1).has_value());
  const double theta = 1.0 - std::tanh(0.01);
  const auto b = smallest_feasible_alpha(theta, 2, 0.5, 0.1);
  REQUIRE(b.has_value());
  CHECK(drift_margin_theta(theta, 2, 0.5, 0.1, *b) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(drift_margin_theta(theta, 2, 0.5, 0.1, *b * 0.99) > 0.0);
}

TEST_CASE("exponential moments at beta = 0 have closed forms") {
  ClusterMonteCarlo o;
  o.replicas = 100000;
  o.seed = 14;
  const double eta = 0.3, t = 2.0;
  // E exp(eta min(E, t)), E ~ Exp(1).
  const double expected = (1.0 - std::exp(-(1.0 - eta) * t)) / (1.0 - eta) + std::exp(-(1.0 - eta) * t);
  const auto r = exp_moment_chi_length(build_cycle(16), 0.0, {3}, eta, 0.1, t, o);
  CHECK(std::abs(r.moment.mean - expected) <= 3.0 * r.moment.std_error);
  for (double c : r.chi) CHECK(c == 0.0);
  // Pure death: E exp(eta Z) = 1 / (1 - eta) with Z ~ Exp(1).
  const auto d = dominating_process(1, 1.0, 2, eta, 0.1, 100000, 15);
  CHECK(std::abs(d.moment.mean - 1.0 / (1.0 - eta)) <= 3.0 * d.moment.std_error);
  for (double y : d.y) CHECK(y == 0.0);
}

TEST_CASE("joint histories of nearby roots share branches") {
  // Histories of adjacent roots overlap, so the chi-moment of the pair is
  // smaller than for a pair far apart.
  ClusterMonteCarlo o;
  o.replicas = 40000;
  o.seed = 16;
  const auto g = build_cycle(64);
  const auto near = exp_moment_chi_length(g, 0.1, {0, 1}, 0.01, 0.1, 20.0, o);
  const auto far = exp_moment_chi_length(g, 0.1, {0, 4}, 0.01, 0.1, 20.0, o);
  CHECK(near.moment.mean + 3.0 * std::hypot(near.moment.std_error, far.moment.std_error) < far.moment.mean);
}

TEST_CASE("dominating process is supercritical when it should be") {
  CHECK_THROWS_AS(dominating_process(1, 0.1, 4, 0.5, 0.1, 50, 1, 5000), SupercriticalError);
}
