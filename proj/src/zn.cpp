#include "infoperc/zn.hpp"

#include <algorithm>
#include <limits>

#include "infoperc/error.hpp"
#include "infoperc/parallel.hpp"
#include "infoperc/rng.hpp"

namespace infoperc {

namespace {

Vertex step_from(Vertex pos, double u, double theta, std::size_t n) {
  return u < theta + 0.5 * (1.0 - theta) ? Vertex((pos + n - 1) % n) : Vertex((pos + 1) % n);
}

std::size_t start_interval(const UpdateSequence& seq, Vertex v, double t_star) {
  if (t_star >= seq.horizon()) return seq.top_interval(v);
  const auto list = seq.events_at(v);
  return std::size_t(std::partition_point(list.begin(), list.end(),
                                          [&](const UpdateEvent& e) { return e.time <= t_star; }) -
                     list.begin());
}

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in [0,1]", {{"theta", theta}});
}

}  // namespace

WalkTrace walk_history(Vertex v, const UpdateSequence& seq, double theta, double t_star) {
  check_theta(theta);
  const std::size_t n = seq.sites();
  if (n < 3) throw InvalidArgument("walk histories need a cycle with n >= 3");
  if (v >= n) throw InvalidArgument("vertex out of range");
  if (!(t_star >= 0.0 && t_star <= seq.horizon())) throw InvalidArgument("t_star outside [0, horizon]");
  WalkTrace trace;
  trace.start = v;
  Vertex pos = v;
  std::size_t interval = start_interval(seq, v, t_star);
  while (interval > 0) {
    const UpdateEvent& e = seq.event(seq.offset(pos) + interval - 1);
    if (e.u < theta) {
      trace.death_time = e.time;
      trace.death_mark = e.u;
      break;
    }
    const Vertex next = step_from(pos, e.u, theta, n);
    trace.jumps.push_back({e.time, next});
    interval = seq.interval_before(next, e.time, pos);
    pos = next;
  }
  trace.final_position = pos;
  return trace;
}

Spin walk_spin(const WalkTrace& w, double theta, const SpinConfig& x0) {
  if (w.death_time) return w.death_mark < 0.5 * theta ? Spin{1} : Spin{-1};
  return x0.at(w.final_position);
}

double survival_probability(double theta, double t_star) {
  check_theta(theta);
  if (!(t_star >= 0.0)) throw InvalidArgument("t_star must be nonnegative");
  return std::exp(-theta * t_star);
}

double zn_cutoff_location(std::size_t n, double theta) {
  if (n < 3) throw InvalidArgument("cycle needs n >= 3");
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in (0,1]");
  return std::log(double(n)) / (2.0 * theta);
}

WalkClusters walk_clusters(const UpdateSequence& seq, double theta) {
  check_theta(theta);
  const std::size_t n = seq.sites();
  if (n < 3) throw InvalidArgument("walk histories need a cycle with n >= 3");
  constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> owner(seq.atom_count(), kFree);
  // Each walk either ends itself (terminal) or merges into an earlier walk.
  std::vector<std::uint32_t> merged_into(n, kFree);
  struct Terminal {
    Vertex site = 0;
    bool survived = false;
    Spin coin = 0;
  };
  std::vector<Terminal> terminal(n);

  WalkClusters out;
  for (Vertex v = 0; v < n; ++v) {
    Vertex pos = v;
    std::size_t interval = seq.top_interval(v);
    for (;;) {
      const std::size_t atom = seq.atom_id(pos, interval);
      if (owner[atom] != kFree) {
        merged_into[v] = owner[atom];
        break;
      }
      owner[atom] = v;
      if (interval == 0) {
        terminal[v] = {pos, true, 0};
        ++out.bottom_sites;
        break;
      }
      const UpdateEvent& e = seq.event(seq.offset(pos) + interval - 1);
      if (e.u < theta) {
        terminal[v] = {pos, false, e.u < 0.5 * theta ? Spin{1} : Spin{-1}};
        break;
      }
      const Vertex next = step_from(pos, e.u, theta, n);
      interval = seq.interval_before(next, e.time, pos);
      pos = next;
    }
  }

  // Walks only merge into lower-numbered walks, so one forward pass settles
  // the representative (the walk that owns the terminal) of every walk.
  std::vector<std::uint32_t> rep(n);
  for (Vertex v = 0; v < n; ++v) rep[v] = merged_into[v] == kFree ? v : rep[merged_into[v]];

  std::vector<std::uint32_t> cluster_of_rep(n, kFree);
  std::vector<std::vector<Vertex>> roots;
  out.cluster_of.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    auto& k = cluster_of_rep[rep[v]];
    if (k == kFree) {
      k = std::uint32_t(roots.size());
      roots.emplace_back();
    }
    roots[k].push_back(v);
    out.cluster_of[v] = k;
  }
  out.clusters.resize(roots.size());
  for (Vertex v = 0; v < n; ++v) {
    if (rep[v] != v) continue;
    auto& c = out.clusters[cluster_of_rep[v]];
    c.roots = VertexSet(roots[cluster_of_rep[v]]);
    c.survives = terminal[v].survived;
    c.terminal_site = terminal[v].site;
    c.spin_if_dead = terminal[v].coin;
    if (c.survives) c.color = Color::Red;
    else c.color = c.roots.size() == 1 ? Color::Blue : Color::Green;
    if (c.survives) out.surviving_walks += c.roots.size();
  }
  return out;
}

SpinConfig walk_reconstruct(const WalkClusters& wc, const UpdateSequence& seq, const SpinConfig& x0) {
  if (x0.size() != seq.sites()) throw InvalidArgument("initial configuration has wrong size");
  SpinConfig out(seq.sites());
  for (Vertex v = 0; v < seq.sites(); ++v) {
    const auto& c = wc.clusters[wc.cluster_of[v]];
    out[v] = c.survives ? x0[c.terminal_site] : c.spin_if_dead;
  }
  return out;
}

GreenCheck green_same_spin_check(const Graph& cycle, double beta, double t_star, std::size_t replicas,
                                 std::uint64_t seed, int workers) {
  if (cycle.family() != GraphFamily::Cycle) throw InvalidArgument("green spin check needs a cycle");
  const std::size_t n = cycle.size();
  const double theta = cycle_theta(beta);
  auto per_replica = run_replicas(
      replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, t_star, derive_seed(seed, stream::kReplica, r));
        const auto wc = walk_clusters(seq, theta);
        SpinConfig random_start(n);
        SplitMix64 engine(derive_seed(seed, stream::kAuxiliary, r));
        for (auto& s : random_start) s = (engine() >> 63) ? Spin{1} : Spin{-1};
        const SpinConfig starts[3] = {all_plus(n), all_minus(n), random_start};
        // Spins from independently traced walks, no coalescence bookkeeping.
        std::vector<SpinConfig> spins;
        std::vector<WalkTrace> traces;
        for (Vertex v = 0; v < n; ++v) traces.push_back(walk_history(v, seq, theta, t_star));
        for (const auto& x0 : starts) {
          SpinConfig s(n);
          for (Vertex v = 0; v < n; ++v) s[v] = walk_spin(traces[v], theta, x0);
          spins.push_back(std::move(s));
        }
        GreenCheck local;
        for (const auto& c : wc.clusters) {
          if (c.color != Color::Green) continue;
          ++local.green_clusters;
          const Spin common = spins[0][c.roots.front()];
          bool ok = true;
          for (const auto& s : spins)
            for (Vertex v : c.roots) ok = ok && s[v] == common;
          if (!ok) ++local.violations;
          if (common == 1) ++local.green_plus;
        }
        return local;
      },
      workers);
  GreenCheck total;
  for (const auto& g : per_replica) {
    total.violations += g.violations;
    total.green_clusters += g.green_clusters;
    total.green_plus += g.green_plus;
  }
  return total;
}

std::vector<Estimate> same_green_probability(const Graph& cycle, double beta, double t_star,
                                             std::size_t max_distance, std::size_t replicas,
                                             std::uint64_t seed, int workers) {
  if (cycle.family() != GraphFamily::Cycle) throw InvalidArgument("same-green probability needs a cycle");
  const std::size_t n = cycle.size();
  if (max_distance == 0 || max_distance >= n) throw InvalidArgument("distance out of range");
  const double theta = cycle_theta(beta);
  auto rows = run_replicas(
      replicas,
      [&](std::size_t r) {
        const auto seq = generate(n, t_star, derive_seed(seed, stream::kReplica, r));
        const auto wc = walk_clusters(seq, theta);
        std::vector<double> freq(max_distance, 0.0);
        for (std::size_t dist = 1; dist <= max_distance; ++dist) {
          std::size_t hits = 0;
          for (Vertex v = 0; v < n; ++v) {
            const auto k = wc.cluster_of[v];
            hits += k == wc.cluster_of[(v + dist) % n] && wc.clusters[k].color == Color::Green;
          }
          freq[dist - 1] = double(hits) / double(n);
        }
        return freq;
      },
      workers);
  std::vector<Estimate> out;
  std::vector<double> column(replicas);
  for (std::size_t k = 0; k < max_distance; ++k) {
    for (std::size_t r = 0; r < replicas; ++r) column[r] = rows[r][k];
    out.push_back(estimate_mean(column));
  }
  return out;
}

}  // namespace infoperc
