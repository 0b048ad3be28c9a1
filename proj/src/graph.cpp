#include "infoperc/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include "infoperc/error.hpp"

namespace infoperc {

namespace {

constexpr std::size_t kMaxVertices = std::numeric_limits<Vertex>::max() / 2;

}  // namespace

std::optional<std::size_t> Graph::common_degree() const noexcept {
  if (size() == 0 || min_degree_ != max_degree_) return std::nullopt;
  return max_degree_;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count());
  for (Vertex v = 0; v < size(); ++v)
    for (Vertex w : neighbors(v))
      if (v < w) out.emplace_back(v, w);
  return out;
}

Graph Graph::from_lists(std::vector<std::vector<Vertex>> lists, GraphFamily family,
                        std::size_t side, std::size_t dim) {
  Graph g;
  g.family_ = family;
  g.side_ = side;
  g.dim_ = dim;
  g.offsets_.assign(lists.size() + 1, 0);
  g.min_degree_ = lists.empty() ? 0 : std::numeric_limits<std::size_t>::max();
  for (std::size_t v = 0; v < lists.size(); ++v) {
    auto& l = lists[v];
    std::sort(l.begin(), l.end());
    g.offsets_[v + 1] = g.offsets_[v] + l.size();
    g.max_degree_ = std::max(g.max_degree_, l.size());
    g.min_degree_ = std::min(g.min_degree_, l.size());
  }
  g.adjacency_.reserve(g.offsets_.back());
  for (const auto& l : lists) g.adjacency_.insert(g.adjacency_.end(), l.begin(), l.end());
  return g;
}

Graph build_cycle(std::size_t n) {
  if (n < 3) throw InvalidGraph("cycle needs at least 3 vertices", {{"n", double(n)}});
  if (n > kMaxVertices) throw CapacityError("cycle too large", {{"n", double(n)}});
  std::vector<std::vector<Vertex>> lists(n);
  for (std::size_t i = 0; i < n; ++i) {
    lists[i] = {Vertex((i + n - 1) % n), Vertex((i + 1) % n)};
  }
  return Graph::from_lists(std::move(lists), GraphFamily::Cycle, n, 1);
}

Graph build_torus(std::size_t side, std::size_t dim) {
  if (dim < 1) throw InvalidGraph("torus dimension must be positive");
  if (side < 3) throw InvalidGraph("torus side must be at least 3", {{"side", double(side)}});
  std::size_t n = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    if (n > kMaxVertices / side)
      throw CapacityError("torus vertex count overflows",
                          {{"side", double(side)}, {"dim", double(dim)}});
    n *= side;
  }
  std::vector<std::vector<Vertex>> lists(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t stride = 1;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t coord = (v / stride) % side;
      const std::size_t base = v - coord * stride;
      lists[v].push_back(Vertex(base + ((coord + 1) % side) * stride));
      lists[v].push_back(Vertex(base + ((coord + side - 1) % side) * stride));
      stride *= side;
    }
  }
  return Graph::from_lists(std::move(lists), dim == 1 ? GraphFamily::Cycle : GraphFamily::Torus,
                           side, dim);
}

Graph build_explicit(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
  if (n == 0) throw InvalidGraph("explicit graph needs at least one vertex");
  if (n > kMaxVertices) throw CapacityError("explicit graph too large", {{"n", double(n)}});
  std::vector<std::vector<Vertex>> lists(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw InvalidGraph("edge endpoint out of range");
    if (a == b) throw InvalidGraph("self-loops are not allowed", {{"vertex", double(a)}});
    lists[a].push_back(b);
    lists[b].push_back(a);
  }
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    if (std::adjacent_find(l.begin(), l.end()) != l.end())
      throw InvalidGraph("parallel edges are not allowed");
  }
  return Graph::from_lists(std::move(lists), GraphFamily::Explicit, n, 0);
}

std::string describe(const Graph& g) {
  std::ostringstream os;
  switch (g.family()) {
    case GraphFamily::Cycle: os << "cycle(n=" << g.size() << ")"; break;
    case GraphFamily::Torus: os << "torus(side=" << g.side() << ",dim=" << g.dim() << ")"; break;
    case GraphFamily::Explicit:
      os << "explicit(n=" << g.size() << ",m=" << g.edge_count() << ")";
      break;
  }
  return os.str();
}

VertexSet::VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
    throw InvalidArgument("vertex set contains duplicates");
}

VertexSet VertexSet::all(std::size_t n) {
  std::vector<Vertex> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = Vertex(i);
  return VertexSet(std::move(ids));
}

bool VertexSet::contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }

void VertexSet::check_bounds(std::size_t n) const {
  if (!ids_.empty() && ids_.back() >= n)
    throw InvalidArgument("vertex id out of range",
                          {{"vertex", double(ids_.back())}, {"n", double(n)}});
}

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max() / 4;

std::size_t cycle_width(std::size_t n, const VertexSet& a) {
  std::size_t largest_gap = n - a[a.size() - 1] + a[0];
  for (std::size_t i = 1; i < a.size(); ++i) largest_gap = std::max<std::size_t>(largest_gap, a[i] - a[i - 1]);
  return n - largest_gap + 1;
}

// Relaxes dist[v] = min_u dist[u] + hops(u, v) with a Dijkstra sweep.
void relax_shortest_paths(const Graph& g, std::vector<std::size_t>& dist) {
  using Item = std::pair<std::size_t, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (Vertex v = 0; v < g.size(); ++v)
    if (dist[v] < kUnreached) queue.emplace(dist[v], v);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d != dist[v]) continue;
    for (Vertex w : g.neighbors(v)) {
      if (d + 1 < dist[w]) {
        dist[w] = d + 1;
        queue.emplace(d + 1, w);
      }
    }
  }
}

// Greedy connector: repeatedly attach the terminal closest to the current
// tree along a shortest path. Always a valid connected subgraph.
std::size_t greedy_width(const Graph& g, const VertexSet& a) {
  const std::size_t n = g.size();
  std::vector<char> in_tree(n, 0), is_terminal(n, 0);
  for (Vertex v : a) is_terminal[v] = 1;
  in_tree[a[0]] = 1;
  std::size_t count = 1, remaining = a.size() - 1;
  std::vector<std::int64_t> parent(n);
  while (remaining > 0) {
    std::fill(parent.begin(), parent.end(), -1);
    std::queue<Vertex> queue;
    for (Vertex v = 0; v < n; ++v)
      if (in_tree[v]) {
        parent[v] = v;
        queue.push(v);
      }
    Vertex found = Vertex(n);
    while (!queue.empty() && found == n) {
      Vertex v = queue.front();
      queue.pop();
      for (Vertex w : g.neighbors(v)) {
        if (parent[w] >= 0) continue;
        parent[w] = v;
        if (is_terminal[w]) {
          found = w;
          break;
        }
        queue.push(w);
      }
    }
    if (found == n) throw InvalidArgument("terminals lie in different components");
    for (Vertex v = found; !in_tree[v]; v = Vertex(parent[v])) {
      in_tree[v] = 1;
      ++count;
      if (is_terminal[v]) --remaining;
    }
  }
  return count;
}

}  // namespace

std::size_t steiner_width_dp(const Graph& g, const VertexSet& a) {
  if (a.empty()) throw InvalidArgument("steiner width of an empty set");
  a.check_bounds(g.size());
  if (a.size() == 1) return 1;
  if (a.size() > 20) throw CapacityError("too many terminals for exact Steiner DP");

  const std::size_t n = g.size();
  const std::size_t k = a.size();
  const std::size_t full = (std::size_t{1} << k) - 1;
  // edges[S][v]: fewest edges in a tree spanning terminals S plus vertex v.
  std::vector<std::vector<std::size_t>> edges(full + 1);
  for (std::size_t i = 0; i < k; ++i) {
    auto& row = edges[std::size_t{1} << i];
    row.assign(n, kUnreached);
    row[a[i]] = 0;
    relax_shortest_paths(g, row);
  }
  for (std::size_t set = 1; set <= full; ++set) {
    if ((set & (set - 1)) == 0) continue;
    auto& row = edges[set];
    row.assign(n, kUnreached);
    // Split off subsets containing the lowest bit to visit each pair once.
    const std::size_t low = set & (~set + 1);
    for (std::size_t sub = (set - 1) & set; sub > 0; sub = (sub - 1) & set) {
      if (!(sub & low)) continue;
      const auto& left = edges[sub];
      const auto& right = edges[set ^ sub];
      for (std::size_t v = 0; v < n; ++v) row[v] = std::min(row[v], left[v] + right[v]);
    }
    relax_shortest_paths(g, row);
  }
  const std::size_t best = edges[full][a[0]];
  if (best >= kUnreached) throw InvalidArgument("terminals lie in different components");
  return best + 1;
}

SteinerWidth steiner_width(const Graph& g, const VertexSet& a) {
  if (a.empty()) throw InvalidArgument("steiner width of an empty set");
  a.check_bounds(g.size());
  if (g.family() == GraphFamily::Cycle) return {cycle_width(g.size(), a), true};
  if (a.size() <= kSteinerExactLimit) return {steiner_width_dp(g, a), true};
  return {greedy_width(g, a), false};
}

}  // namespace infoperc
