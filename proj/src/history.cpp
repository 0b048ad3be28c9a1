#include "infoperc/history.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "infoperc/rng.hpp"

namespace infoperc {

std::vector<Segment> History::segments() const {
  std::vector<Segment> out;
  out.reserve(nodes.size());
  for (const auto& nd : nodes) out.push_back({nd.site, nd.t_low, nd.t_high});
  return out;
}

std::vector<BranchPoint> History::branch_points(const Graph& g) const {
  std::vector<BranchPoint> out;
  for (const auto& nd : nodes) {
    if (nd.kind != NodeKind::Branch) continue;
    const auto nbrs = g.neighbors(nd.site);
    out.push_back({nd.site, nd.t_low, {nbrs.begin(), nbrs.end()}});
  }
  return out;
}

std::vector<ObliviousPoint> History::oblivious_points(const UpdateSequence& seq) const {
  std::vector<ObliviousPoint> out;
  for (const auto& nd : nodes)
    if (nd.kind == NodeKind::Oblivious) out.push_back({nd.site, nd.t_low, seq.event(nd.event).u});
  return out;
}

VertexSet History::surviving() const {
  std::vector<Vertex> sites;
  for (const auto& nd : nodes)
    if (nd.kind == NodeKind::Bottom) sites.push_back(nd.site);
  return VertexSet(std::move(sites));
}

std::size_t History::branch_count() const noexcept {
  return std::size_t(std::count_if(nodes.begin(), nodes.end(),
                                   [](const Node& nd) { return nd.kind == NodeKind::Branch; }));
}

std::size_t History::oblivious_count() const noexcept {
  return std::size_t(std::count_if(nodes.begin(), nodes.end(),
                                   [](const Node& nd) { return nd.kind == NodeKind::Oblivious; }));
}

std::size_t History::chi() const noexcept {
  std::size_t total = 0;
  for (const auto& nd : nodes)
    if (nd.kind == NodeKind::Branch) total += nd.child_end - nd.child_begin;
  return total;
}

double History::length() const noexcept {
  double total = 0.0;
  for (const auto& nd : nodes) total += nd.t_high - nd.t_low;
  return total;
}

bool History::survives() const noexcept {
  return std::any_of(nodes.begin(), nodes.end(), [](const Node& nd) { return nd.kind == NodeKind::Bottom; });
}

History develop_history(const VertexSet& roots, const UpdateSequence& seq, const UpdateRule& rule,
                        const Graph& g, double length_cap) {
  if (roots.empty()) throw InvalidArgument("history needs at least one root");
  if (!(length_cap > 0.0)) throw InvalidArgument("length cap must be positive", {{"cap", length_cap}});
  if (seq.sites() != g.size()) throw InvalidArgument("sequence and graph sizes differ");
  roots.check_bounds(g.size());

  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  History h;
  h.roots = roots;
  h.fingerprint = seq.fingerprint();
  std::vector<std::uint32_t> node_of(seq.atom_count(), kUnseen);
  std::vector<std::uint32_t> pending;
  double length = 0.0;

  auto overflow = [&] {
    throw SupercriticalError("history length exceeded its cap",
                             std::make_shared<const History>(h),
                             {{"length", length}, {"cap", length_cap}, {"nodes", double(h.nodes.size())}});
  };

  auto enter = [&](Vertex v, std::size_t interval, double t) -> std::uint32_t {
    const std::size_t atom = seq.atom_id(v, interval);
    if (node_of[atom] != kUnseen) {
      auto& nd = h.nodes[node_of[atom]];
      if (t > nd.t_high) {
        length += t - nd.t_high;
        nd.t_high = t;
      }
      return node_of[atom];
    }
    History::Node nd;
    nd.site = v;
    nd.interval = std::uint32_t(interval);
    if (interval > 0) {
      nd.event = std::uint32_t(seq.offset(v) + interval - 1);
      nd.t_low = seq.event(nd.event).time;
    }
    nd.t_high = t;
    length += t - nd.t_low;
    const auto idx = std::uint32_t(h.nodes.size());
    h.nodes.push_back(nd);
    node_of[atom] = idx;
    pending.push_back(idx);
    return idx;
  };

  for (Vertex v : roots) {
    h.root_nodes.push_back(enter(v, seq.top_interval(v), seq.horizon()));
    if (length > length_cap) overflow();
  }
  while (!pending.empty()) {
    const std::uint32_t idx = pending.back();
    pending.pop_back();
    if (h.nodes[idx].interval == 0) {
      h.nodes[idx].kind = History::NodeKind::Bottom;
      continue;
    }
    const Vertex v = h.nodes[idx].site;
    const UpdateEvent& e = seq.event(h.nodes[idx].event);
    if (rule.is_oblivious(v, e.u)) {
      h.nodes[idx].kind = History::NodeKind::Oblivious;
      continue;
    }
    h.nodes[idx].kind = History::NodeKind::Branch;
    const auto begin = std::uint32_t(h.children.size());
    for (Vertex w : g.neighbors(v)) {
      const std::uint32_t child = enter(w, seq.interval_before(w, e.time, v), e.time);
      h.children.push_back(child);
      if (length > length_cap) overflow();
    }
    h.nodes[idx].child_begin = begin;
    h.nodes[idx].child_end = std::uint32_t(h.children.size());
  }
  return h;
}

History develop_history(const VertexSet& roots, const UpdateSequence& seq, double beta, const Graph& g,
                        double length_cap) {
  return develop_history(roots, seq, UpdateRule(beta, g), g, length_cap);
}

std::vector<Spin> resolve_nodes(const History& h, const UpdateSequence& seq, const UpdateRule& rule,
                                const Graph& g, const SpinConfig& x0) {
  if (h.fingerprint != seq.fingerprint()) throw IntegrityError("history was developed from another sequence");
  if (x0.size() != seq.sites() || g.size() != seq.sites())
    throw InvalidArgument("initial configuration, sequence and graph sizes differ");

  const std::size_t count = h.nodes.size();
  std::vector<Spin> spin(count, 0);
  std::vector<std::uint8_t> state(count, 0);  // 0 new, 1 expanded, 2 resolved
  std::vector<std::uint32_t> stack;
  for (std::uint32_t start = 0; start < count; ++start) {
    if (state[start] == 2) continue;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::uint32_t idx = stack.back();
      const auto& nd = h.nodes[idx];
      if (state[idx] == 2) {
        stack.pop_back();
        continue;
      }
      if (state[idx] == 0 && nd.kind == History::NodeKind::Branch) {
        state[idx] = 1;
        for (auto c = nd.child_begin; c < nd.child_end; ++c)
          if (state[h.children[c]] == 0) stack.push_back(h.children[c]);
          else if (state[h.children[c]] == 1) throw IntegrityError("history contains a cycle");
        continue;
      }
      stack.pop_back();
      if (nd.event != History::kNoEvent &&
          (nd.event >= seq.event_count() || seq.event(nd.event).site != nd.site))
        throw IntegrityError("history node does not match the update sequence");
      switch (nd.kind) {
        case History::NodeKind::Bottom:
          spin[idx] = x0[nd.site];
          break;
        case History::NodeKind::Oblivious:
          spin[idx] = rule.oblivious_spin(nd.site, seq.event(nd.event).u);
          break;
        case History::NodeKind::Branch: {
          int sigma = 0;
          for (auto c = nd.child_begin; c < nd.child_end; ++c) sigma += spin[h.children[c]];
          spin[idx] = rule.resolve(nd.site, seq.event(nd.event).u, sigma);
          break;
        }
      }
      state[idx] = 2;
    }
  }
  return spin;
}

SpinConfig reconstruct(const History& h, const UpdateSequence& seq, const UpdateRule& rule, const Graph& g,
                       const SpinConfig& x0) {
  const auto spin = resolve_nodes(h, seq, rule, g, x0);
  SpinConfig out;
  out.reserve(h.root_nodes.size());
  for (auto idx : h.root_nodes) out.push_back(spin[idx]);
  return out;
}

SpinConfig reconstruct(const History& h, const UpdateSequence& seq, double beta, const Graph& g,
                       const SpinConfig& x0) {
  return reconstruct(h, seq, UpdateRule(beta, g), g, x0);
}

SpinConfig perfect_sample(const Graph& g, double beta, std::uint64_t seed, const PerfectSampleOptions& opts) {
  if (!(opts.horizon_step > 0.0)) throw InvalidArgument("horizon step must be positive");
  const std::size_t n = g.size();
  const double cap = opts.length_cap > 0.0 ? opts.length_cap : default_length_cap(n);
  const UpdateRule rule(beta, g);
  const VertexSet everyone = VertexSet::all(n);
  std::vector<UpdateSequence> blocks;
  for (std::size_t depth = 1;; depth *= 2) {
    if (double(depth) * opts.horizon_step > cap)
      throw SupercriticalError("perfect sampler did not coalesce within the length cap", nullptr,
                               {{"depth", double(depth) * opts.horizon_step}, {"cap", cap}});
    while (blocks.size() < depth)
      blocks.push_back(generate(n, opts.horizon_step, derive_seed(seed, stream::kPerfectBlock, blocks.size())));
    const UpdateSequence seq = depth == 1 ? blocks.front() : stack_blocks(blocks, seed);
    const History h = develop_history(everyone, seq, rule, g, cap);
    if (!h.survives()) return reconstruct(h, seq, rule, g, all_plus(n));
  }
}

void write_history(std::ostream& os, const History& h, const UpdateSequence& seq, const Graph& g) {
  char buf[96];
  for (const auto& s : h.segments()) {
    std::snprintf(buf, sizeof buf, "SEG %u %.17g %.17g\n", s.site, s.t_low, s.t_high);
    os << buf;
  }
  for (const auto& b : h.branch_points(g)) {
    std::snprintf(buf, sizeof buf, "BR %u %.17g", b.site, b.time);
    os << buf;
    for (Vertex w : b.neighbors) os << ' ' << w;
    os << '\n';
  }
  for (const auto& o : h.oblivious_points(seq)) {
    std::snprintf(buf, sizeof buf, "OBL %u %.17g %.17g\n", o.site, o.time, o.u);
    os << buf;
  }
  for (Vertex v : h.surviving()) os << "SURV " << v << '\n';
}

}  // namespace infoperc
