#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace infoperc {

using Vertex = std::uint32_t;

enum class GraphFamily { Cycle, Torus, Explicit };

// Undirected simple graph in compressed adjacency form. Neighbor lists are
// sorted. Immutable once built, so it can be shared across worker threads.
class Graph {
 public:
  Graph() = default;

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  // Degree shared by every vertex, if the graph is regular.
  std::optional<std::size_t> common_degree() const noexcept;
  bool is_regular() const noexcept { return common_degree().has_value(); }

  GraphFamily family() const noexcept { return family_; }
  // Side length and dimension for tori; cycles report (n, 1).
  std::size_t side() const noexcept { return side_; }
  std::size_t dim() const noexcept { return dim_; }

  std::vector<std::pair<Vertex, Vertex>> edges() const;

  friend Graph build_cycle(std::size_t n);
  friend Graph build_torus(std::size_t side, std::size_t dim);
  friend Graph build_explicit(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

 private:
  static Graph from_lists(std::vector<std::vector<Vertex>> lists, GraphFamily family,
                          std::size_t side, std::size_t dim);

  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::size_t max_degree_ = 0;
  std::size_t min_degree_ = 0;
  GraphFamily family_ = GraphFamily::Explicit;
  std::size_t side_ = 0;
  std::size_t dim_ = 0;
};

Graph build_cycle(std::size_t n);
Graph build_torus(std::size_t side, std::size_t dim);
Graph build_explicit(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

std::string describe(const Graph& g);

// Sorted set of distinct vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}
  explicit VertexSet(std::vector<Vertex> ids);

  static VertexSet all(std::size_t n);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(Vertex v) const;
  Vertex front() const { return ids_.front(); }
  Vertex operator[](std::size_t i) const { return ids_[i]; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  std::span<const Vertex> ids() const noexcept { return ids_; }

  // Throws InvalidArgument if some id is >= n.
  void check_bounds(std::size_t n) const;

  bool operator==(const VertexSet&) const = default;

 private:
  std::vector<Vertex> ids_;
};

struct SteinerWidth {
  std::size_t vertices = 0;
  bool exact = true;  // false: certified upper bound from the greedy connector
};

// Largest terminal set solved exactly by subset dynamic programming.
inline constexpr std::size_t kSteinerExactLimit = 10;

// Minimum vertex count of a connected subgraph containing `terminals`.
// Cycles use the closed-form largest-gap rule; other graphs use
// Dreyfus-Wagner up to kSteinerExactLimit terminals and a greedy bound above.
SteinerWidth steiner_width(const Graph& g, const VertexSet& terminals);

// Dreyfus-Wagner on any graph, ignoring the cycle shortcut.
std::size_t steiner_width_dp(const Graph& g, const VertexSet& terminals);

}  // namespace infoperc
