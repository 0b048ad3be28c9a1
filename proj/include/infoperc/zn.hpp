#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "infoperc/clusters.hpp"
#include "infoperc/graph.hpp"
#include "infoperc/heat_bath.hpp"
#include "infoperc/stats.hpp"
#include "infoperc/update_stream.hpp"

namespace infoperc {

// Histories on the cycle Z_n under the copy-a-neighbor rule: at an update
// with mark u a lineage dies if u < theta, otherwise it jumps to the left
// neighbor if u < theta + (1 - theta)/2 and to the right one otherwise.
// This rule has the same law as the heat-bath rule on a cycle with
// theta = 1 - tanh(2 beta), but it is a different pathwise coupling.

struct WalkStep {
  double time = 0.0;
  Vertex position = 0;  // position after the jump
};

struct WalkTrace {
  Vertex start = 0;
  std::vector<WalkStep> jumps;  // in decreasing time
  std::optional<double> death_time;
  double death_mark = 0.0;      // u of the killing update
  Vertex final_position = 0;    // where the walk died or reached time 0
  bool survived() const noexcept { return !death_time.has_value(); }
};

// The walk from (v, t_star) down to time 0 (t_star <= seq.horizon()).
WalkTrace walk_history(Vertex v, const UpdateSequence& seq, double theta, double t_star);

// Spin at the top of a walk: the fair coin of its killing update, or x0 at
// its final position if it survived.
Spin walk_spin(const WalkTrace& w, double theta, const SpinConfig& x0);

inline double cycle_theta(double beta) { return 1.0 - std::tanh(2.0 * beta); }

// e^{-theta t_star}.
double survival_probability(double theta, double t_star);

// (2 theta)^{-1} ln n.
double zn_cutoff_location(std::size_t n, double theta);

struct WalkCluster {
  VertexSet roots;
  bool survives = false;
  Color color = Color::Green;
  Vertex terminal_site = 0;  // death or time-0 position of the merged walk
  Spin spin_if_dead = 0;     // coin of the killing update (dead clusters only)
};

struct WalkClusters {
  std::vector<WalkCluster> clusters;
  std::vector<std::uint32_t> cluster_of;  // per start vertex
  std::size_t bottom_sites = 0;           // |H_V(0)| as a set of sites
  std::size_t surviving_walks = 0;        // walks reaching time 0, with multiplicity
};

// All n walks from the top of seq; walks entering an interval another walk
// already visited coalesce with it.
WalkClusters walk_clusters(const UpdateSequence& seq, double theta);

// Root spins of every vertex under the walk rule from x0.
SpinConfig walk_reconstruct(const WalkClusters& wc, const UpdateSequence& seq, const SpinConfig& x0);

struct GreenCheck {
  std::size_t violations = 0;      // green clusters whose roots disagree, or depend on x0
  std::size_t green_clusters = 0;  // multi-root green clusters examined
  std::size_t green_plus = 0;      // green clusters whose common spin is +1
};

// Checks that every green cluster has one common root spin, the same from
// several initial configurations.
GreenCheck green_same_spin_check(const Graph& cycle, double beta, double t_star, std::size_t replicas,
                                 std::uint64_t seed, int workers = 0);

// P(0 and r lie in the same Green walk cluster), r = 1..max_distance.
std::vector<Estimate> same_green_probability(const Graph& cycle, double beta, double t_star,
                                             std::size_t max_distance, std::size_t replicas,
                                             std::uint64_t seed, int workers = 0);

}  // namespace infoperc
