#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "infoperc/graph.hpp"
#include "infoperc/heat_bath.hpp"
#include "infoperc/stats.hpp"
#include "infoperc/update_stream.hpp"

namespace infoperc {

// Configuration at the horizon after applying every event of seq in global
// (time, site) order with the shared UpdateRule.
SpinConfig run_forward(const SpinConfig& x0, const UpdateSequence& seq, double beta, const Graph& g);

// Runs state forward through seq and calls observe(i, state) once per entry
// of `times` (which must be sorted), with every event of time <= times[i]
// applied. Leaves state at the horizon.
void run_forward_observed(SpinConfig& state, const UpdateSequence& seq, const UpdateRule& rule,
                          const Graph& g, std::span<const double> times,
                          const std::function<void(std::size_t, const SpinConfig&)>& observe);

struct MonteCarloOptions {
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
  // Average the observable over all sites (valid only on transitive graphs).
  bool average_sites = false;
  Vertex origin = 0;
  int workers = 0;
};

struct MagnetizationPoint {
  double time = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
};

struct MagnetizationCurve {
  std::vector<MagnetizationPoint> points;
  bool site_averaged = false;
  std::uint64_t seed = 0;
};

// E X_t^+(origin) from the all-plus start, one forward run per replica.
MagnetizationCurve estimate_magnetization(const Graph& g, double beta, std::span<const double> times,
                                          const MonteCarloOptions& opts);

struct TmOptions {
  double precision = 0.02;        // target width of the confidence interval on t_m
  double z = 1.96;                // confidence multiplier
  std::size_t initial_replicas = 256;
  std::size_t replica_budget = 1u << 20;
  bool average_sites = true;
  std::uint64_t seed = 1;
  int workers = 0;
};

struct TmEstimate {
  double t_m = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t replicas = 0;
  bool site_averaged = true;
};

// First time the magnetization falls to 1/sqrt(n). Bracketed by the decay
// bounds e^{-t} <= m_t <= e^{-(1 - beta d) t}, then located on a fine time
// grid by batch-doubling Monte Carlo until the interval where the
// confidence band crosses 1/sqrt(n) is narrower than `precision`.
// Throws BudgetExceeded (details: t_m, ci_low, ci_high, replicas) otherwise.
TmEstimate find_t_m(const Graph& g, double beta, const TmOptions& opts);

// Frequency with which the plus- and minus-started chains, driven by the
// same update sequence, disagree at the origin at time t.
Estimate grand_coupling_disagreement(const Graph& g, double beta, double t,
                                     const MonteCarloOptions& opts);

// Monte Carlo estimate of sum_u Cov(X_t(u), X_t(v)) from x0.
Estimate covariance_sum(const Graph& g, double beta, double t, Vertex v, const SpinConfig& x0,
                        const MonteCarloOptions& opts);

// Sum of spins.
inline long spin_sum(const SpinConfig& x) {
  long s = 0;
  for (Spin sp : x) s += sp;
  return s;
}

}  // namespace infoperc
