#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "infoperc/forward.hpp"
#include "infoperc/graph.hpp"
#include "infoperc/heat_bath.hpp"
#include "infoperc/stats.hpp"

namespace infoperc {

inline constexpr std::size_t kStationaryMaxSites = 20;
inline constexpr std::size_t kTransientMaxSites = 12;

// Probability per configuration of {-1,+1}^n. Configuration index bit i set
// means spin +1 at site i.
struct DistributionTable {
  std::size_t sites = 0;
  std::vector<double> prob;
  double truncation_error = 0.0;  // mass dropped by a truncated expansion

  static std::size_t index_of(const SpinConfig& x);
  static SpinConfig config_of(std::size_t index, std::size_t sites);
};

// Ising measure on g with stable log-sum-exp normalization.
DistributionTable exact_stationary(const Graph& g, double beta);

// Law of X_t from x0 by uniformization of the heat-bath generator
// (uniformization rate n, Poisson tail truncated below 1e-12).
DistributionTable exact_transient(const Graph& g, double beta, const SpinConfig& x0, double t);

// Half the L1 distance.
double tv_distance(const DistributionTable& p, const DistributionTable& q);

// Empirical law of sampled configurations.
DistributionTable empirical_distribution(std::span<const SpinConfig> samples);

enum class ProfileMode { Exact, Statistical };

struct TvPoint {
  double time = 0.0;
  double tv = 0.0;         // exact TV, or the threshold-event lower envelope
  double std_error = 0.0;  // 0 for exact entries
  double plug_in = 0.0;    // biased plug-in TV of the sum-of-spins laws (statistical only)
  bool exact = false;
};

struct TvProfile {
  std::vector<TvPoint> points;
};

struct StatisticalOptions {
  std::size_t replicas = 1000;          // forward runs from all-plus
  std::size_t stationary_samples = 0;   // perfect samples; 0 = same as replicas
  std::uint64_t seed = 1;
  double perfect_step = 2.0;
  int workers = 0;
};

// Distance of the all-plus start from stationarity at each time. Exact mode
// needs n <= 12. Statistical mode compares sums of spins of forward runs
// with those of perfect samples: it reports sup_c |P(f(X_t) >= c) -
// P(f(X') >= c)|, a lower bound on TV up to sampling noise, with the
// two-sample KS scale sqrt(1/R + 1/R') as its error; the plug-in TV of the
// two empirical sum-of-spins laws is attached and is biased upward.
TvProfile tv_profile(const Graph& g, double beta, std::span<const double> times, ProfileMode mode,
                     const StatisticalOptions& opts = {});

// Sums of spins of perfect samples, reusable across profile times.
std::vector<long> stationary_spin_sums(const Graph& g, double beta, const StatisticalOptions& opts);

struct LowerBound {
  double bound = 0.0;
  double std_error = 0.0;
  double threshold = 0.0;  // c = mean(Y) / 2
};

// P(Y >= c) - P(f(X') >= c) with Y the sum of spins of the all-plus chain
// at time t, X' a perfect sample and c = E Y / 2.
LowerBound lower_bound_tv(const Graph& g, double beta, double t, const StatisticalOptions& opts);

// Miller-Peres check on |V| <= 4: for random mixtures mu over subsets R with
// random spin laws on R and uniform spins off R, compare
// ||mu - nu||^2_{L2(nu)} with E 2^{|R cap R'|} - 1 exactly.
struct MpInstance {
  double lhs = 0.0;
  double rhs = 0.0;
};
MpInstance mp_l2_evaluate(std::size_t sites, std::span<const double> subset_weights,
                          std::span<const std::vector<double>> spin_laws);
std::size_t mp_l2_check(std::size_t sites, std::size_t trials, std::uint64_t seed);

struct CutoffRow {
  std::size_t n = 0;
  double t_m = 0.0;
  std::vector<double> eps;
  std::vector<double> t_mix;  // per eps, interpolated from the profile
  TvProfile profile;          // on times t_m + offsets

  // t_mix(eps) - t_mix(1 - eps); both levels must be in `eps`.
  double window(double e) const;
};

struct CutoffOptions {
  std::vector<double> offsets;  // profile grid relative to t_m
  StatisticalOptions stats;
  TmOptions tm;
};

// t_mix(eps) by linear interpolation: first time the profile drops to eps.
// Throws BudgetExceeded when the profile never brackets eps.
double t_mix_from_profile(const TvProfile& profile, double eps);

// For each cycle size, locates t_m, measures a statistical profile around it
// and reads off t_mix(eps).
std::vector<CutoffRow> cutoff_window_scan(std::span<const std::size_t> sizes, double beta,
                                          std::span<const double> eps, const CutoffOptions& opts);

}  // namespace infoperc
