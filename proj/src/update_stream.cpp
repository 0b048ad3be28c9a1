#include "infoperc/update_stream.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "infoperc/error.hpp"
#include "infoperc/rng.hpp"

namespace infoperc {

UpdateSequence::UpdateSequence(std::size_t sites, double horizon, std::uint64_t seed,
                               std::vector<std::vector<UpdateEvent>> per_site)
    : sites_(sites), horizon_(horizon), seed_(seed) {
  if (!(horizon >= 0.0)) throw InvalidArgument("horizon must be nonnegative");
  if (per_site.size() != sites) throw InvalidArgument("per-site list count must equal site count");
  std::size_t total = 0;
  for (const auto& list : per_site) total += list.size();
  events_.reserve(total);
  offsets_.assign(sites + 1, 0);
  for (std::size_t v = 0; v < sites; ++v) {
    double last = 0.0;
    for (auto e : per_site[v]) {
      if (!(e.time > last) || e.time > horizon)
        throw InvalidArgument("event times must be strictly increasing within (0, horizon]",
                              {{"site", double(v)}, {"time", e.time}});
      if (!(e.u >= 0.0 && e.u < 1.0)) throw InvalidArgument("update mark outside [0,1)");
      last = e.time;
      e.site = Vertex(v);
      events_.push_back(e);
    }
    offsets_[v + 1] = events_.size();
  }
}

std::size_t UpdateSequence::interval_before(Vertex v, double time, Vertex site) const {
  const auto list = events_at(v);
  const auto it = std::partition_point(list.begin(), list.end(), [&](const UpdateEvent& e) {
    return e.time < time || (e.time == time && v < site);
  });
  return std::size_t(it - list.begin());
}

std::vector<UpdateEvent> UpdateSequence::merged() const {
  std::vector<UpdateEvent> out(events_.begin(), events_.end());
  std::sort(out.begin(), out.end(), [](const UpdateEvent& a, const UpdateEvent& b) {
    return a.time < b.time || (a.time == b.time && a.site < b.site);
  });
  return out;
}

UpdateSequence generate(std::size_t sites, double horizon, std::uint64_t seed) {
  if (!(horizon >= 0.0)) throw InvalidArgument("horizon must be nonnegative", {{"horizon", horizon}});
  std::vector<std::vector<UpdateEvent>> per_site(sites);
  for (std::size_t v = 0; v < sites; ++v) {
    SplitMix64 engine(derive_seed(seed, stream::kSite, v));
    auto& list = per_site[v];
    double t = exponential1(engine);
    while (t <= horizon) {
      list.push_back({Vertex(v), t, uniform01(engine)});
      t += exponential1(engine);
    }
  }
  return UpdateSequence(sites, horizon, seed, std::move(per_site));
}

std::optional<UpdateEvent> latest_update_before(const UpdateSequence& seq, Vertex v, double t) {
  if (v >= seq.sites()) throw InvalidArgument("vertex out of range", {{"vertex", double(v)}});
  if (!(t >= 0.0 && t <= seq.horizon()))
    throw InvalidArgument("lookup time outside [0, horizon]", {{"t", t}});
  const auto list = seq.events_at(v);
  const auto it = std::partition_point(list.begin(), list.end(),
                                       [&](const UpdateEvent& e) { return e.time < t; });
  if (it == list.begin()) return std::nullopt;
  return *(it - 1);
}

UpdateSequence stack_blocks(std::span<const UpdateSequence> top_first, std::uint64_t seed) {
  if (top_first.empty()) throw InvalidArgument("no blocks to stack");
  const std::size_t sites = top_first.front().sites();
  double total = 0.0;
  for (const auto& b : top_first) {
    if (b.sites() != sites) throw InvalidArgument("blocks disagree on site count");
    total += b.horizon();
  }
  std::vector<std::vector<UpdateEvent>> per_site(sites);
  // Walk bottom-up so each site's list comes out in increasing time.
  double base = total;
  std::vector<double> bases(top_first.size());
  for (std::size_t k = 0; k < top_first.size(); ++k) {
    base -= top_first[k].horizon();
    bases[k] = base;
  }
  for (std::size_t k = top_first.size(); k-- > 0;) {
    const auto& block = top_first[k];
    for (Vertex v = 0; v < sites; ++v) {
      for (auto e : block.events_at(v)) {
        e.time += bases[k];
        auto& list = per_site[v];
        // Rounding can only collapse times at a block boundary; keep order strict.
        if (!list.empty() && !(e.time > list.back().time))
          e.time = std::nextafter(list.back().time, total + 1.0);
        e.time = std::min(e.time, total);
        if (!list.empty() && !(e.time > list.back().time))
          throw IntegrityError("stacked block times collapsed at the horizon");
        list.push_back(e);
      }
    }
  }
  return UpdateSequence(sites, total, seed, std::move(per_site));
}

void write_text(std::ostream& os, const UpdateSequence& seq) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# infoperc-updates v1 sites=%zu horizon=%a seed=%llu\n", seq.sites(),
                seq.horizon(), static_cast<unsigned long long>(seq.seed()));
  os << buf;
  for (const auto& e : seq.all_events()) {
    std::snprintf(buf, sizeof buf, "%u %a %a\n", e.site, e.time, e.u);
    os << buf;
  }
}

UpdateSequence read_text(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty update-sequence stream");
  std::size_t sites = 0;
  char horizon_buf[64] = {0};
  unsigned long long seed = 0;
  if (std::sscanf(line.c_str(), "# infoperc-updates v1 sites=%zu horizon=%63s seed=%llu", &sites,
                  horizon_buf, &seed) != 3)
    throw InvalidArgument("bad update-sequence header");
  const double horizon = std::strtod(horizon_buf, nullptr);
  std::vector<std::vector<UpdateEvent>> per_site(sites);
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string site_tok, time_tok, u_tok;
    if (!(fields >> site_tok >> time_tok >> u_tok)) throw InvalidArgument("bad update line: " + line);
    const unsigned long site = std::strtoul(site_tok.c_str(), nullptr, 10);
    if (site >= sites) throw InvalidArgument("update site out of range");
    per_site[site].push_back(
        {Vertex(site), std::strtod(time_tok.c_str(), nullptr), std::strtod(u_tok.c_str(), nullptr)});
  }
  return UpdateSequence(sites, horizon, seed, std::move(per_site));
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary format assumes little-endian host");

template <class T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
T get(std::istream& is) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof value))
    throw InvalidArgument("truncated binary update sequence");
  return value;
}

constexpr char kMagic[8] = {'I', 'P', 'U', 'S', '0', '0', '0', '1'};

}  // namespace

void write_binary(std::ostream& os, const UpdateSequence& seq) {
  os.write(kMagic, sizeof kMagic);
  put<std::uint64_t>(os, seq.sites());
  put<double>(os, seq.horizon());
  put<std::uint64_t>(os, seq.seed());
  put<std::uint64_t>(os, seq.event_count());
  for (const auto& e : seq.all_events()) {
    put<std::uint32_t>(os, e.site);
    put<double>(os, e.time);
    put<double>(os, e.u);
  }
}

UpdateSequence read_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw InvalidArgument("not a binary update sequence");
  const auto sites = get<std::uint64_t>(is);
  const auto horizon = get<double>(is);
  const auto seed = get<std::uint64_t>(is);
  const auto count = get<std::uint64_t>(is);
  std::vector<std::vector<UpdateEvent>> per_site(sites);
  for (std::uint64_t i = 0; i < count; ++i) {
    UpdateEvent e;
    e.site = get<std::uint32_t>(is);
    e.time = get<double>(is);
    e.u = get<double>(is);
    if (e.site >= sites) throw InvalidArgument("update site out of range");
    per_site[e.site].push_back(e);
  }
  return UpdateSequence(sites, horizon, seed, std::move(per_site));
}

}  // namespace infoperc
