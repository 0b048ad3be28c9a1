#include "infoperc/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "infoperc/parallel.hpp"
#include "infoperc/rng.hpp"
#include "infoperc/zn.hpp"

namespace infoperc {

const char* to_string(Color c) noexcept {
  switch (c) {
    case Color::Red: return "red";
    case Color::Green: return "green";
    case Color::Blue: return "blue";
  }
  return "?";
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

Color color_from(bool red, std::size_t roots, bool survives) {
  if (red) return Color::Red;
  if (roots == 1 && !survives) return Color::Blue;
  return Color::Green;
}

}  // namespace

std::vector<Cluster> build_clusters(const Graph& g, const UpdateSequence& seq, double beta,
                                    double length_cap) {
  const std::size_t n = g.size();
  const UpdateRule rule(beta, g);
  const double cap = length_cap > 0.0 ? length_cap : default_length_cap(n);
  const History joint = develop_history(VertexSet::all(n), seq, rule, g, cap);

  DisjointSets sets(joint.nodes.size());
  for (std::uint32_t i = 0; i < joint.nodes.size(); ++i) {
    const auto& nd = joint.nodes[i];
    for (auto c = nd.child_begin; c < nd.child_end; ++c) sets.unite(i, joint.children[c]);
  }

  const auto plus = resolve_nodes(joint, seq, rule, g, all_plus(n));
  const auto minus = resolve_nodes(joint, seq, rule, g, all_minus(n));

  std::unordered_map<std::uint32_t, std::size_t> cluster_of_component;
  std::vector<std::vector<Vertex>> roots;
  std::vector<char> red;
  for (Vertex v = 0; v < n; ++v) {
    const std::uint32_t node = joint.root_nodes[v];
    const auto [it, fresh] = cluster_of_component.try_emplace(sets.find(node), roots.size());
    if (fresh) {
      roots.emplace_back();
      red.push_back(0);
    }
    roots[it->second].push_back(v);
    if (plus[node] != minus[node]) red[it->second] = 1;
  }

  std::vector<Cluster> clusters(roots.size());
  // Renumber each component's nodes into its own History.
  std::vector<std::uint32_t> local(joint.nodes.size());
  std::vector<std::size_t> owner(joint.nodes.size());
  for (std::uint32_t i = 0; i < joint.nodes.size(); ++i) {
    const std::size_t k = cluster_of_component.at(sets.find(i));
    owner[i] = k;
    local[i] = std::uint32_t(clusters[k].history.nodes.size());
    clusters[k].history.nodes.push_back(joint.nodes[i]);
  }
  for (std::uint32_t i = 0; i < joint.nodes.size(); ++i) {
    auto& h = clusters[owner[i]].history;
    auto& nd = h.nodes[local[i]];
    const auto begin = std::uint32_t(h.children.size());
    for (auto c = joint.nodes[i].child_begin; c < joint.nodes[i].child_end; ++c)
      h.children.push_back(local[joint.children[c]]);
    nd.child_begin = begin;
    nd.child_end = std::uint32_t(h.children.size());
  }
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    auto& c = clusters[k];
    c.roots = VertexSet(roots[k]);
    c.history.roots = c.roots;
    c.history.fingerprint = joint.fingerprint;
    for (Vertex v : c.roots) c.history.root_nodes.push_back(local[joint.root_nodes[v]]);
    const auto width = steiner_width(g, c.roots);
    c.stats = {width.vertices, width.exact, c.history.chi(), c.history.length(), c.history.survives()};
    c.color = color_from(red[k] != 0, c.roots.size(), c.stats.survives);
  }
  return clusters;
}

Color classify(const Cluster& c, const UpdateSequence& seq, double beta, const Graph& g) {
  const UpdateRule rule(beta, g);
  const auto plus = reconstruct(c.history, seq, rule, g, all_plus(g.size()));
  const auto minus = reconstruct(c.history, seq, rule, g, all_minus(g.size()));
  return color_from(plus != minus, c.roots.size(), c.history.survives());
}

std::vector<std::uint8_t> red_vertices(const std::vector<Cluster>& clusters, std::size_t n) {
  std::vector<std::uint8_t> red(n, 0);
  for (const auto& c : clusters)
    if (c.color == Color::Red)
      for (Vertex v : c.roots) red[v] = 1;
  return red;
}

namespace {

void require_cycle(const Graph& g, ClusterRule rule) {
  if (rule == ClusterRule::CycleWalk && g.family() != GraphFamily::Cycle)
    throw InvalidArgument("the walk rule needs a cycle graph");
}

std::vector<std::uint8_t> red_set(const Graph& g, const UpdateSequence& seq, double beta,
                                  const ClusterMonteCarlo& opts) {
  const std::size_t n = g.size();
  if (opts.rule == ClusterRule::HeatBath)
    return red_vertices(build_clusters(g, seq, beta, opts.length_cap), n);
  const auto wc = walk_clusters(seq, cycle_theta(beta));
  std::vector<std::uint8_t> red(n, 0);
  for (Vertex v = 0; v < n; ++v) red[v] = wc.clusters[wc.cluster_of[v]].color == Color::Red;
  return red;
}

}  // namespace

Estimate red_intersection_moment(const Graph& g, double beta, double t_star, const ClusterMonteCarlo& opts) {
  if (opts.replicas < 2) throw InvalidArgument("need at least 2 replicas");
  if (!(t_star >= 0.0)) throw InvalidArgument("t_star must be nonnegative");
  if (t_star == 0.0 && g.size() > 20)
    throw InvalidArgument("at t_star = 0 the moment is 2^n; refusing n > 20", {{"n", double(g.size())}});
  require_cycle(g, opts.rule);
  const std::size_t n = g.size();
  auto samples = run_replicas(
      opts.replicas,
      [&](std::size_t r) {
        const auto a = generate(n, t_star, derive_seed(opts.seed, stream::kReplica, r));
        const auto b = generate(n, t_star, derive_seed(opts.seed, stream::kPairedCopy, r));
        const auto red_a = red_set(g, a, beta, opts);
        const auto red_b = red_set(g, b, beta, opts);
        int both = 0;
        for (std::size_t v = 0; v < n; ++v) both += red_a[v] & red_b[v];
        return std::ldexp(1.0, both);
      },
      opts.workers);
  return estimate_mean(samples);
}

Estimate estimate_red_prob(const Graph& g, double beta, double t_star, const VertexSet& a,
                           const ClusterMonteCarlo& opts) {
  if (a.empty()) throw InvalidArgument("empty vertex set");
  a.check_bounds(g.size());
  if (opts.replicas < 1) throw InvalidArgument("need at least 1 replica");
  require_cycle(g, opts.rule);
  const std::size_t n = g.size();
  auto samples = run_replicas(
      opts.replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, t_star, derive_seed(opts.seed, stream::kReplica, r));
        if (opts.rule == ClusterRule::CycleWalk) {
          const auto wc = walk_clusters(seq, cycle_theta(beta));
          const auto& c = wc.clusters[wc.cluster_of[a.front()]];
          return c.roots == a && c.color == Color::Red ? 1.0 : 0.0;
        }
        for (const auto& c : build_clusters(g, seq, beta, opts.length_cap))
          if (c.roots.contains(a.front())) return c.roots == a && c.color == Color::Red ? 1.0 : 0.0;
        return 0.0;
      },
      opts.workers);
  return estimate_mean(samples);
}

double drift_margin_theta(double theta, std::size_t d, double eta, double lambda, double alpha) {
  return eta + theta * std::expm1(-alpha) + (1.0 - theta) * std::expm1((lambda + alpha) * double(d));
}

double drift_margin(double beta, std::size_t d, double eta, double lambda, double alpha) {
  if (beta < 0 || eta < 0 || lambda < 0 || alpha < 0 || !(eta < 1.0))
    throw InvalidArgument("drift margin needs nonnegative parameters and eta < 1");
  return drift_margin_theta(oblivious_probability(beta, d), d, eta, lambda, alpha);
}

std::optional<double> smallest_feasible_alpha(double theta, std::size_t d, double eta, double lambda) {
  if (!(eta >= 0.0 && eta < 1.0) || lambda < 0.0 || theta < 0.0 || theta > 1.0)
    throw InvalidArgument("invalid drift parameters");
  if (theta == 1.0) return -std::log1p(-eta);
  if (theta == 0.0) return std::nullopt;
  // The margin is convex in alpha with its minimum where
  // theta e^{-alpha} = (1 - theta) d e^{(lambda + alpha) d}.
  const double dd = double(d);
  const double minimizer = -std::log((1.0 - theta) * dd * std::exp(lambda * dd) / theta) / (1.0 + dd);
  auto f = [&](double a) { return drift_margin_theta(theta, d, eta, lambda, a); };
  if (minimizer <= 0.0 || f(minimizer) > 0.0) return std::nullopt;
  double lo = 0.0, hi = minimizer;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

ExpMomentResult exp_moment_chi_length(const Graph& g, double beta, const VertexSet& a, double eta,
                                      double lambda, double t_star, const ClusterMonteCarlo& opts) {
  if (!(eta > 0.0 && eta < 1.0) || !(lambda > 0.0)) throw InvalidArgument("need eta in (0,1) and lambda > 0");
  if (a.empty()) throw InvalidArgument("empty vertex set");
  a.check_bounds(g.size());
  const std::size_t n = g.size();
  const UpdateRule rule(beta, g);
  const double cap = opts.length_cap > 0.0 ? opts.length_cap : default_length_cap(n);
  struct Sample {
    double chi = 0, length = 0;
  };
  auto samples = run_replicas(
      opts.replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, t_star, derive_seed(opts.seed, stream::kReplica, r));
        const auto h = develop_history(a, seq, rule, g, cap);
        return Sample{double(h.chi()), h.length()};
      },
      opts.workers);
  ExpMomentResult out;
  std::vector<double> values(samples.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    out.chi.push_back(samples[r].chi);
    out.length.push_back(samples[r].length);
    values[r] = std::exp(eta * samples[r].length + lambda * samples[r].chi);
  }
  out.moment = estimate_mean(values);
  return out;
}

DominatingResult dominating_process(std::size_t initial, double theta, std::size_t d, double eta,
                                    double lambda, std::size_t replicas, std::uint64_t seed,
                                    std::size_t event_cap) {
  if (initial == 0) throw InvalidArgument("need at least one initial particle");
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in [0,1]");
  if (replicas < 1) throw InvalidArgument("need at least 1 replica");
  DominatingResult out;
  std::vector<double> values(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    std::mt19937_64 engine(derive_seed(seed, stream::kReplica, r));
    double w = double(initial), y = 0.0, z = 0.0;
    std::size_t events = 0;
    while (w > 0.0) {
      if (++events > event_cap)
        throw SupercriticalError("dominating process did not die out", nullptr,
                                 {{"events", double(events)}, {"population", w}});
      z += exponential1(engine);  // W * Exp(rate W) = Exp(1)
      if (uniform01(engine) < theta) {
        w -= 1.0;
      } else {
        w += double(d);
        y += double(d);
      }
    }
    out.y.push_back(y);
    out.z.push_back(z);
    values[r] = std::exp(eta * z + lambda * y);
  }
  out.moment = estimate_mean(values);
  return out;
}

}  // namespace infoperc
