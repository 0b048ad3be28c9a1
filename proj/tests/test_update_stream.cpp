#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "infoperc/error.hpp"
#include "infoperc/stats.hpp"
#include "infoperc/update_stream.hpp"

using namespace infoperc;

TEST_CASE("generate basics") {
  CHECK(generate(5, 0.0, 1).empty());
  CHECK_THROWS_AS(generate(5, -1.0, 1), InvalidArgument);
  const auto a = generate(20, 3.0, 99);
  const auto b = generate(20, 3.0, 99);
  CHECK(a == b);
  CHECK_FALSE(a == generate(20, 3.0, 100));
  for (Vertex v = 0; v < 20; ++v) {
    const auto ev = a.events_at(v);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      CHECK(ev[i].site == v);
      CHECK(ev[i].time > 0.0);
      CHECK(ev[i].time <= 3.0);
      CHECK(ev[i].u >= 0.0);
      CHECK(ev[i].u < 1.0);
      if (i > 0) CHECK(ev[i].time > ev[i - 1].time);
    }
  }
  // A site's stream does not depend on how many sites there are.
  const auto c = generate(30, 3.0, 99);
  for (Vertex v = 0; v < 20; ++v) {
    const auto x = a.events_at(v), y = c.events_at(v);
    CHECK(std::equal(x.begin(), x.end(), y.begin(), y.end()));
  }
}

TEST_CASE("mean event count is n times horizon") {
  std::vector<double> counts;
  for (std::uint64_t s = 0; s < 10000; ++s) counts.push_back(double(generate(100, 5.0, s).event_count()));
  const auto e = estimate_mean(counts);
  CHECK(std::abs(e.mean - 500.0) <= 3.0 * std::sqrt(500.0 / 10000.0));
}

TEST_CASE("inter-arrival times are exponential") {
  const auto seq = generate(1, 100000.0, 5);
  std::vector<double> gaps;
  double last = 0.0;
  for (const auto& e : seq.events_at(0)) {
    gaps.push_back(e.time - last);
    last = e.time;
  }
  REQUIRE(gaps.size() > 90000);
  const auto ks = ks_test(gaps, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); });
  CHECK(ks.p_value > 1e-3);
  std::vector<double> marks;
  for (const auto& e : seq.events_at(0)) marks.push_back(e.u);
  CHECK(ks_test(marks, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 1e-3);
}

TEST_CASE("merged stream has uniform site marks") {
  const auto seq = generate(10, 10000.0, 8);
  const auto merged = seq.merged();
  std::vector<std::uint64_t> freq(10, 0);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    ++freq[merged[i].site];
    if (i > 0) {
      const auto& p = merged[i - 1];
      CHECK((p.time < merged[i].time || (p.time == merged[i].time && p.site < merged[i].site)));
    }
  }
  const std::vector<double> probs(10, 0.1);
  CHECK(chi_square_gof(freq, probs).p_value > 1e-3);
}

TEST_CASE("latest update before") {
  std::vector<std::vector<UpdateEvent>> lists(2);
  lists[0] = {{0, 1.0, 0.3}, {0, 2.5, 0.7}};
  const UpdateSequence seq(2, 4.0, 0, lists);
  CHECK_FALSE(latest_update_before(seq, 1, 3.0).has_value());
  CHECK(latest_update_before(seq, 0, 2.0)->time == 1.0);
  CHECK(latest_update_before(seq, 0, 2.5)->time == 1.0);
  CHECK(latest_update_before(seq, 0, 4.0)->time == 2.5);
  CHECK_FALSE(latest_update_before(seq, 0, 1.0).has_value());
  CHECK_THROWS_AS(latest_update_before(seq, 0, 4.5), InvalidArgument);
  CHECK_THROWS_AS(latest_update_before(seq, 0, -0.1), InvalidArgument);
}

TEST_CASE("sequence validation") {
  std::vector<std::vector<UpdateEvent>> unsorted(1);
  unsorted[0] = {{0, 2.0, 0.1}, {0, 1.0, 0.1}};
  CHECK_THROWS_AS(UpdateSequence(1, 3.0, 0, unsorted), InvalidArgument);
  std::vector<std::vector<UpdateEvent>> late(1);
  late[0] = {{0, 3.5, 0.1}};
  CHECK_THROWS_AS(UpdateSequence(1, 3.0, 0, late), InvalidArgument);
  std::vector<std::vector<UpdateEvent>> bad_u(1);
  bad_u[0] = {{0, 1.0, 1.0}};
  CHECK_THROWS_AS(UpdateSequence(1, 3.0, 0, bad_u), InvalidArgument);
}

TEST_CASE("interval indexing follows the (time, site) order") {
  std::vector<std::vector<UpdateEvent>> lists(2);
  lists[0] = {{0, 1.0, 0.3}, {0, 2.0, 0.7}};
  lists[1] = {{1, 2.0, 0.5}};
  const UpdateSequence seq(2, 3.0, 0, lists);
  CHECK(seq.atom_count() == 5);
  CHECK(seq.top_interval(0) == 2);
  CHECK(seq.interval_before(0, 2.0, 1) == 2);  // site 0's event at 2.0 precedes (2.0, site 1)
  CHECK(seq.interval_before(1, 2.0, 0) == 0);  // site 1's event at 2.0 follows (2.0, site 0)
  CHECK(seq.interval_before(0, 1.5, 1) == 1);
  CHECK(seq.atom_id(1, 0) == 3);
}

TEST_CASE("text and binary dumps round trip exactly") {
  const auto seq = generate(7, 2.5, 1234);
  std::stringstream text;
  write_text(text, seq);
  CHECK(read_text(text) == seq);
  std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
  write_binary(bin, seq);
  CHECK(read_binary(bin) == seq);
  std::stringstream broken("# not a header\n");
  CHECK_THROWS(read_text(broken));
  std::stringstream truncated("IPUS0001");
  CHECK_THROWS(read_binary(truncated));
}

TEST_CASE("stacked blocks") {
  const auto top = generate(4, 1.0, 1);
  const auto below = generate(4, 2.0, 2);
  const UpdateSequence blocks[] = {top, below};
  const auto s = stack_blocks(blocks, 9);
  CHECK(s.horizon() == doctest::Approx(3.0));
  CHECK(s.event_count() == top.event_count() + below.event_count());
  for (Vertex v = 0; v < 4; ++v) {
    const auto ev = s.events_at(v);
    const auto t = top.events_at(v);
    REQUIRE(ev.size() >= t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto& e = ev[ev.size() - t.size() + i];
      CHECK(e.time == doctest::Approx(t[i].time + 2.0).epsilon(1e-12));
      CHECK(e.u == t[i].u);
    }
  }
}
