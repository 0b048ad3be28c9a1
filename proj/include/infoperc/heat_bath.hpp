#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "infoperc/graph.hpp"

namespace infoperc {

using Spin = std::int8_t;
using SpinConfig = std::vector<Spin>;

// Probability that a heat-bath update sets the spin to plus when the
// neighbor spins sum to sigma_sum: e^{b s} / (e^{b s} + e^{-b s}).
// Throws InvalidArgument if |sigma_sum| > degree or beta < 0.
double heat_bath_threshold(double beta, int sigma_sum, std::size_t degree);

// Probability of an oblivious update: 1 - tanh(beta * degree).
double oblivious_probability(double beta, std::size_t degree);

// The single update rule shared by the forward and backward simulations.
// The unit interval is laid out as
//   [0, theta/2)                      plus, oblivious
//   [theta/2, theta)                  minus, oblivious
//   [theta, theta + (tanh(b s) + tanh(b d))/2)   plus
//   [..., 1)                          minus
// which gives plus with probability heat_bath_threshold(beta, s, d) and lets
// a backward branch stop at any u < theta without looking at neighbors.
class UpdateRule {
 public:
  UpdateRule(double beta, const Graph& g);

  double beta() const noexcept { return beta_; }
  // theta for the given site (1 - tanh(beta * deg(v))).
  double theta(Vertex v) const noexcept { return theta_[degree_of_[v]]; }

  bool is_oblivious(Vertex v, double u) const noexcept { return u < theta(v); }

  // Spin after an update with mark u at v; only valid when is_oblivious.
  Spin oblivious_spin(Vertex v, double u) const noexcept {
    return u < 0.5 * theta(v) ? Spin{1} : Spin{-1};
  }

  // Spin after an update with mark u at v given neighbor spin sum sigma.
  Spin resolve(Vertex v, double u, int sigma) const noexcept {
    const std::size_t d = degree_of_[v];
    if (u < theta_[d]) return u < 0.5 * theta_[d] ? Spin{1} : Spin{-1};
    return u - theta_[d] < half_sum_[d][std::size_t(sigma + int(d))] ? Spin{1} : Spin{-1};
  }

 private:
  double beta_;
  std::vector<std::uint32_t> degree_of_;
  std::vector<double> theta_;                  // indexed by degree
  std::vector<std::vector<double>> half_sum_;  // [degree][sigma + degree]
};

inline SpinConfig all_plus(std::size_t n) { return SpinConfig(n, Spin{1}); }
inline SpinConfig all_minus(std::size_t n) { return SpinConfig(n, Spin{-1}); }

}  // namespace infoperc
