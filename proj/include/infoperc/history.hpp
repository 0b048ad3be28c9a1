#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <vector>

#include "infoperc/error.hpp"
#include "infoperc/graph.hpp"
#include "infoperc/heat_bath.hpp"
#include "infoperc/update_stream.hpp"

namespace infoperc {

struct Segment {
  Vertex site = 0;
  double t_low = 0.0;
  double t_high = 0.0;
};

struct BranchPoint {
  Vertex site = 0;
  double time = 0.0;
  std::vector<Vertex> neighbors;
};

struct ObliviousPoint {
  Vertex site = 0;
  double time = 0.0;
  double u = 0.0;
};

// Update history of a root set A in the space-time slab V x [0, H],
// explored backward from A x {H}.
//
// Each node is one inter-update interval of one site that the history
// enters; its temporal segment runs from the highest entry point down to the
// interval's lower end, where the node either touches time 0 (Bottom), ends
// at an oblivious update, or branches to every neighbor of its site.
class History {
 public:
  enum class NodeKind : std::uint8_t { Bottom, Oblivious, Branch };

  static constexpr std::uint32_t kNoEvent = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    Vertex site = 0;
    std::uint32_t interval = 0;       // interval index at `site`
    std::uint32_t event = kNoEvent;   // global event index of the lower end
    NodeKind kind = NodeKind::Bottom;
    double t_low = 0.0;               // 0 or the time of `event`
    double t_high = 0.0;              // highest entry time
    std::uint32_t child_begin = 0;    // children[child_begin, child_end)
    std::uint32_t child_end = 0;
  };

  VertexSet roots;
  std::vector<std::uint32_t> root_nodes;  // node index per root, same order
  std::vector<Node> nodes;
  std::vector<std::uint32_t> children;
  SequenceFingerprint fingerprint;

  std::vector<Segment> segments() const;
  std::vector<BranchPoint> branch_points(const Graph& g) const;
  std::vector<ObliviousPoint> oblivious_points(const UpdateSequence& seq) const;
  // Sites whose segment touches time 0.
  VertexSet surviving() const;

  std::size_t branch_count() const noexcept;
  std::size_t oblivious_count() const noexcept;
  // Number of spatial edges: sum of the degrees of the branching sites.
  std::size_t chi() const noexcept;
  // Total temporal length of the history.
  double length() const noexcept;
  bool survives() const noexcept;
};

// Developing a history grew past its total-length cap, which signals a
// supercritical (non-dying) branching regime. Carries what was explored.
class SupercriticalError : public Error {
 public:
  SupercriticalError(const std::string& what, std::shared_ptr<const History> partial,
                     std::map<std::string, double> details = {})
      : Error(ErrorKind::Supercritical, what, std::move(details)), partial_(std::move(partial)) {}
  const History* partial() const noexcept { return partial_.get(); }

 private:
  std::shared_ptr<const History> partial_;
};

// Default cap on total history length: 10^4 per site.
inline double default_length_cap(std::size_t n) { return 1e4 * double(n); }

// Explores the histories of `roots` backward from the top of seq. Intervals
// shared between branches are explored once.
History develop_history(const VertexSet& roots, const UpdateSequence& seq, const UpdateRule& rule,
                        const Graph& g, double length_cap);
History develop_history(const VertexSet& roots, const UpdateSequence& seq, double beta, const Graph& g,
                        double length_cap);

// Spin at the top of every node, resolved bottom-up from x0.
std::vector<Spin> resolve_nodes(const History& h, const UpdateSequence& seq, const UpdateRule& rule,
                                const Graph& g, const SpinConfig& x0);

// Spins at the roots (in h.roots order) determined by the history.
// Throws IntegrityError if h was not developed from seq.
SpinConfig reconstruct(const History& h, const UpdateSequence& seq, const UpdateRule& rule,
                       const Graph& g, const SpinConfig& x0);
SpinConfig reconstruct(const History& h, const UpdateSequence& seq, double beta, const Graph& g,
                       const SpinConfig& x0);

struct PerfectSampleOptions {
  double horizon_step = 1.0;
  double length_cap = 0.0;  // 0: default_length_cap(n)
};

// Exact draw from the Ising measure: stacks independent blocks of updates
// below time 0 (reusing earlier blocks, doubling the depth each round) until
// the history of every site dies out before the bottom, then reads off the
// spins. Throws SupercriticalError when the cap is reached.
SpinConfig perfect_sample(const Graph& g, double beta, std::uint64_t seed,
                          const PerfectSampleOptions& opts = {});

// Line-based dump: "SEG site t_low t_high", "BR site t n1 n2 ...",
// "OBL site t u", "SURV site". Times in %.17g.
void write_history(std::ostream& os, const History& h, const UpdateSequence& seq, const Graph& g);

}  // namespace infoperc
