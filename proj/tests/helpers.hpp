#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "infoperc/graph.hpp"
#include "infoperc/heat_bath.hpp"
#include "infoperc/rng.hpp"

namespace testing {

using infoperc::Graph;
using infoperc::Vertex;
using infoperc::VertexSet;

// Whether the vertices of `mask` induce a connected subgraph.
inline bool induced_connected(const Graph& g, std::size_t mask) {
  if (mask == 0) return false;
  std::size_t start = 0;
  while (!((mask >> start) & 1u)) ++start;
  std::size_t seen = std::size_t{1} << start;
  std::queue<Vertex> q;
  q.push(Vertex(start));
  while (!q.empty()) {
    const Vertex v = q.front();
    q.pop();
    for (Vertex w : g.neighbors(v)) {
      const std::size_t bit = std::size_t{1} << w;
      if ((mask & bit) && !(seen & bit)) {
        seen |= bit;
        q.push(w);
      }
    }
  }
  return seen == mask;
}

// Smallest connected vertex subset containing A, by enumerating all subsets.
inline std::size_t brute_force_steiner(const Graph& g, const VertexSet& a) {
  std::size_t need = 0;
  for (Vertex v : a) need |= std::size_t{1} << v;
  std::size_t best = g.size() + 1;
  for (std::size_t m = 1; m < (std::size_t{1} << g.size()); ++m) {
    if ((m & need) != need) continue;
    const auto k = std::size_t(__builtin_popcountll(m));
    if (k < best && induced_connected(g, m)) best = k;
  }
  return best;
}

inline infoperc::SpinConfig random_config(std::size_t n, std::uint64_t seed) {
  infoperc::SplitMix64 e(seed);
  infoperc::SpinConfig x(n);
  for (auto& s : x) s = (e() >> 63) ? infoperc::Spin{1} : infoperc::Spin{-1};
  return x;
}

// |a - b| within k joint standard errors.
inline bool within(double a, double b, double sa, double sb, double k = 3.0) {
  return std::abs(a - b) <= k * std::sqrt(sa * sa + sb * sb);
}

}  // namespace testing
