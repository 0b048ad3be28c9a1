#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infoperc/graph.hpp"
#include "infoperc/history.hpp"
#include "infoperc/stats.hpp"
#include "infoperc/update_stream.hpp"

namespace infoperc {

enum class Color { Red, Green, Blue };

const char* to_string(Color c) noexcept;

struct ClusterStats {
  std::size_t steiner_width = 0;
  bool steiner_exact = true;
  std::size_t chi = 0;
  double length = 0.0;
  bool survives = false;
};

struct Cluster {
  VertexSet roots;
  History history;  // the cluster's own nodes, renumbered
  Color color = Color::Green;
  ClusterStats stats;
};

// Connected components of the joint history of all sites. Two histories are
// joined when they enter a common inter-update interval of some site or are
// linked by a branching edge. Clusters are ordered by smallest root.
std::vector<Cluster> build_clusters(const Graph& g, const UpdateSequence& seq, double beta,
                                    double length_cap = 0.0);

// Red when the all-plus and all-minus starts give different root spins
// (monotonicity of the update rule makes these two starts extremal), Blue
// for a single root whose history dies before time 0, Green otherwise.
Color classify(const Cluster& c, const UpdateSequence& seq, double beta, const Graph& g);

// Indicator per vertex of membership in a Red cluster.
std::vector<std::uint8_t> red_vertices(const std::vector<Cluster>& clusters, std::size_t n);

// How the space-time clusters are built.
enum class ClusterRule {
  HeatBath,  // general branching rule on any graph
  CycleWalk  // coalescing killed random walks (cycles only)
};

struct ClusterMonteCarlo {
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
  ClusterRule rule = ClusterRule::HeatBath;
  double length_cap = 0.0;
  int workers = 0;
};

// E 2^{|V_Red intersect V_Red'|} over pairs of independent update sequences.
// At t_star = 0 every vertex is red; that case is rejected for n > 20.
Estimate red_intersection_moment(const Graph& g, double beta, double t_star, const ClusterMonteCarlo& opts);

// Frequency with which the cluster containing A has root set exactly A and is Red.
Estimate estimate_red_prob(const Graph& g, double beta, double t_star, const VertexSet& a,
                           const ClusterMonteCarlo& opts);

// eta + theta (e^{-alpha} - 1) + (1 - theta)(e^{(lambda + alpha) d} - 1)
// with theta = 1 - tanh(beta d). Negative values make exp(eta Z + lambda Y +
// alpha W) a supermartingale for the dominating branching process.
double drift_margin(double beta, std::size_t d, double eta, double lambda, double alpha);
double drift_margin_theta(double theta, std::size_t d, double eta, double lambda, double alpha);

// Smallest alpha > 0 with drift_margin <= 0, if any.
std::optional<double> smallest_feasible_alpha(double theta, std::size_t d, double eta, double lambda);

struct ExpMomentResult {
  Estimate moment;
  std::vector<double> chi;     // per replica
  std::vector<double> length;  // per replica
};

// E exp(eta L(H_A) + lambda chi(H_A)) for histories developed from A x {t_star}.
ExpMomentResult exp_moment_chi_length(const Graph& g, double beta, const VertexSet& a, double eta,
                                      double lambda, double t_star, const ClusterMonteCarlo& opts);

struct DominatingResult {
  Estimate moment;
  std::vector<double> y;  // spawned count at extinction, per replica
  std::vector<double> z;  // integrated population at extinction, per replica
};

// Branching process started from `initial` particles: each dies at rate
// theta or spawns d new ones (Y += d) at rate 1 - theta; Z grows at rate W.
// Estimates E exp(eta Z + lambda Y) at extinction. Throws SupercriticalError
// if a trajectory exceeds `event_cap` events.
DominatingResult dominating_process(std::size_t initial, double theta, std::size_t d, double eta,
                                    double lambda, std::size_t replicas, std::uint64_t seed,
                                    std::size_t event_cap = 1u << 20);

}  // namespace infoperc
