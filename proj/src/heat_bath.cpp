#include "infoperc/heat_bath.hpp"

#include <cmath>
#include <cstdlib>

#include "infoperc/error.hpp"

namespace infoperc {

double heat_bath_threshold(double beta, int sigma_sum, std::size_t degree) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be nonnegative", {{"beta", beta}});
  if (std::size_t(std::abs(sigma_sum)) > degree)
    throw InvalidArgument("neighbor sum exceeds degree",
                          {{"sigma", double(sigma_sum)}, {"degree", double(degree)}});
  return 0.5 * (1.0 + std::tanh(beta * sigma_sum));
}

double oblivious_probability(double beta, std::size_t degree) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be nonnegative", {{"beta", beta}});
  return 1.0 - std::tanh(beta * double(degree));
}

UpdateRule::UpdateRule(double beta, const Graph& g) : beta_(beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidArgument("beta must be finite and nonnegative", {{"beta", beta}});
  const std::size_t max_d = g.max_degree();
  theta_.resize(max_d + 1);
  half_sum_.resize(max_d + 1);
  for (std::size_t d = 0; d <= max_d; ++d) {
    const double td = std::tanh(beta * double(d));
    theta_[d] = 1.0 - td;
    half_sum_[d].resize(2 * d + 1);
    for (int s = -int(d); s <= int(d); ++s)
      half_sum_[d][std::size_t(s + int(d))] = 0.5 * (std::tanh(beta * s) + td);
  }
  degree_of_.resize(g.size());
  for (Vertex v = 0; v < g.size(); ++v) degree_of_[v] = std::uint32_t(g.degree(v));
}

}  // namespace infoperc
