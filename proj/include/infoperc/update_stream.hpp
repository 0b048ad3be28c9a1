#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoperc/graph.hpp"

namespace infoperc {

struct UpdateEvent {
  Vertex site = 0;
  double time = 0.0;  // in (0, horizon]
  double u = 0.0;     // in [0, 1)

  bool operator==(const UpdateEvent&) const = default;
};

// Identifies the sequence a History was developed from.
struct SequenceFingerprint {
  std::uint64_t seed = 0;
  std::size_t sites = 0;
  std::size_t events = 0;
  double horizon = 0.0;

  bool operator==(const SequenceFingerprint&) const = default;
};

// The Poisson update sequence on V x (0, horizon], stored per site in time
// order (compressed: events of site v occupy [offset(v), offset(v+1))).
//
// Interval ("atom") indexing: site v with k events has k + 1 inter-update
// intervals. Interval j lies between event j-1 (or time 0 when j == 0) and
// event j (or the horizon when j == k). Atom ids are global:
// atom_id(v, j) = offset(v) + v + j.
class UpdateSequence {
 public:
  UpdateSequence() = default;
  // Builds from per-site event lists (each sorted by strictly increasing time).
  UpdateSequence(std::size_t sites, double horizon, std::uint64_t seed,
                 std::vector<std::vector<UpdateEvent>> per_site);

  std::size_t sites() const noexcept { return sites_; }
  double horizon() const noexcept { return horizon_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t event_count() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  std::span<const UpdateEvent> events_at(Vertex v) const {
    return {events_.data() + offsets_[v], events_.data() + offsets_[v + 1]};
  }
  std::span<const UpdateEvent> all_events() const noexcept { return events_; }
  std::size_t offset(Vertex v) const noexcept { return offsets_[v]; }
  const UpdateEvent& event(std::size_t global_index) const { return events_[global_index]; }

  std::size_t atom_count() const noexcept { return events_.size() + sites_; }
  std::size_t atom_id(Vertex v, std::size_t j) const noexcept { return offsets_[v] + v + j; }

  // Number of events at v ordered before the space-time point (time, site)
  // under the (time, site) lexicographic order; this is the interval index
  // of v that contains that point.
  std::size_t interval_before(Vertex v, double time, Vertex site) const;
  // Interval index at the top of the slab (every event counts).
  std::size_t top_interval(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  // Every event of every site in global (time, site) order.
  std::vector<UpdateEvent> merged() const;

  SequenceFingerprint fingerprint() const noexcept {
    return {seed_, sites_, events_.size(), horizon_};
  }

  bool operator==(const UpdateSequence&) const = default;

 private:
  std::size_t sites_ = 0;
  double horizon_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<UpdateEvent> events_;
};

// Rate-1 Poisson clocks on every site over (0, horizon]; site v draws from
// SplitMix64(derive_seed(seed, stream::kSite, v)).
UpdateSequence generate(std::size_t sites, double horizon, std::uint64_t seed);

// Latest event at v with time strictly less than t.
std::optional<UpdateEvent> latest_update_before(const UpdateSequence& seq, Vertex v, double t);

// Places blocks on one time axis: blocks[0] occupies the top slab
// (H - h0, H], blocks[1] the one below it, and so on, H being the sum of
// block horizons. Earlier blocks keep their position relative to the top.
UpdateSequence stack_blocks(std::span<const UpdateSequence> top_first, std::uint64_t seed);

// Line format: header "# infoperc-updates v1 sites=<n> horizon=<h> seed=<s>"
// then one "site time u" line per event (hexfloat, lossless).
void write_text(std::ostream& os, const UpdateSequence& seq);
UpdateSequence read_text(std::istream& is);

// Flat little-endian binary: magic "IPUS0001", u64 sites, f64 horizon,
// u64 seed, u64 count, then count x (u32 site, f64 time, f64 u).
void write_binary(std::ostream& os, const UpdateSequence& seq);
UpdateSequence read_binary(std::istream& is);

}  // namespace infoperc
