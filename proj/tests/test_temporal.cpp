#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "collabnet/errors.hpp"
#include "collabnet/events.hpp"
#include "collabnet/temporal_graph.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace collabnet;

namespace {

CollaborationEvent make_event(std::string id, double date,
                              std::vector<std::string> participants) {
  CollaborationEvent e;
  e.id = std::move(id);
  e.date = date;
  std::sort(participants.begin(), participants.end());
  participants.erase(std::unique(participants.begin(), participants.end()),
                     participants.end());
  e.participants = std::move(participants);
  return e;
}

/// Randomized stream with dyadic-fraction dates so interval arithmetic is
/// exact in binary floating point.
std::vector<CollaborationEvent> random_stream(std::mt19937_64& rng,
                                              int n_events) {
  std::vector<CollaborationEvent> events;
  events.reserve(n_events);
  std::uniform_int_distribution<int> year(1900, 1959);
  std::uniform_int_distribution<int> eighth(0, 7);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_int_distribution<int> who(0, 39);
  for (int i = 0; i < n_events; ++i) {
    std::vector<std::string> names;
    const int n = size(rng);
    for (int j = 0; j < n; ++j) names.push_back("n" + std::to_string(who(rng)));
    events.push_back(make_event("e" + std::to_string(i),
                                year(rng) + eighth(rng) / 8.0,
                                std::move(names)));
  }
  return events;
}

struct OracleCounts {
  std::map<std::string, std::set<std::string>> neighbors;
  std::map<std::string, int> interval_degree;
  std::set<std::pair<std::string, std::string>> pairs;
  std::int64_t intervals = 0;
};

/// Brute-force reference: scan every pair of every event and test the
/// activity rule directly.
OracleCounts oracle_at(const std::vector<CollaborationEvent>& events, double t,
                       double window) {
  OracleCounts out;
  for (const auto& e : events) {
    const double from = e.date - window;
    const double until = e.date;
    if (!(from <= t && t < until)) continue;
    for (const auto& [a, b] : pairwise_edges(e)) {
      out.neighbors[a].insert(b);
      out.neighbors[b].insert(a);
      out.interval_degree[a] += 1;
      out.interval_degree[b] += 1;
      out.pairs.insert({a, b});
      out.intervals += 1;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("active intervals span [date - window, date)") {
  auto e = make_event("e", 1950.0, {"A", "B"});
  auto iv = active_intervals(e, 2.0);
  REQUIRE(iv.size() == 1);
  CHECK(iv[0].active_from == 1948.0);
  CHECK(iv[0].active_until == 1950.0);

  auto e2 = make_event("e2", 2000.0, {"A", "B"});
  auto iv2 = active_intervals(e2, 3.0);
  CHECK(iv2[0].active_from == 1997.0);
  CHECK(iv2[0].active_until == 2000.0);

  auto e3 = make_event("e3", 1800.0, {"A", "B"});
  auto iv3 = active_intervals(e3, 2.0);
  CHECK(iv3[0].active_from == 1798.0);
  CHECK(iv3[0].active_until == 1800.0);
}

TEST_CASE("one interval per pair, canonical endpoint order") {
  auto e = make_event("e", 1950.0, {"C", "A", "B"});
  auto iv = active_intervals(e, 2.0);
  REQUIRE(iv.size() == 3);
  for (const auto& edge : iv) {
    CHECK(edge.a < edge.b);
    CHECK(edge.active_until - edge.active_from == 2.0);
  }
}

TEST_CASE("window must be positive") {
  auto e = make_event("e", 1950.0, {"A", "B"});
  CHECK_THROWS_AS(active_intervals(e, 0.0), InputError);
  CHECK_THROWS_AS(active_intervals(e, -1.0), InputError);
}

TEST_CASE("snapshot keeps only nodes with an interval containing the instant") {
  std::vector<CollaborationEvent> events = {
      make_event("E1", 1950.0, {"A", "B"}),   // active on [1948, 1950)
      make_event("E2", 1951.0, {"B", "C"}),   // active on [1949, 1951)
  };
  // At 1948.0 only E1 is live: C is absent, A and B have one neighbor each.
  auto s = degree_snapshot(events, 1948.0, 2.0);
  CHECK(s.degrees == std::vector<int>{1, 1});
  CHECK(s.node_count() == 2);

  // At 1949.0 E2's interval [1949, 1951) opens (closed lower endpoint), so
  // C joins and B sees both neighbors.
  auto s2 = degree_snapshot(events, 1949.0, 2.0);
  CHECK(s2.degrees == std::vector<int>{1, 1, 2});

  // At 1950.0 E1 has expired (open upper endpoint): only {B, C} remain.
  auto s3 = degree_snapshot(events, 1950.0, 2.0);
  CHECK(s3.degrees == std::vector<int>{1, 1});
}

TEST_CASE("no events gives an empty sample") {
  auto s = degree_snapshot({}, 1950.0, 2.0);
  CHECK(s.node_count() == 0);
  CHECK(s.degrees.empty());
}

TEST_CASE("distinct mode collapses repeated collaborations") {
  std::vector<CollaborationEvent> events = {
      make_event("E1", 1950.0, {"A", "B"}),
      make_event("E2", 1950.5, {"A", "B"}),
  };
  auto distinct = degree_snapshot(events, 1949.0, 2.0, DegreeMode::distinct);
  CHECK(distinct.degrees == std::vector<int>{1, 1});

  auto multi = degree_snapshot(events, 1949.0, 2.0, DegreeMode::multi);
  CHECK(multi.degrees == std::vector<int>{2, 2});
}

TEST_CASE("sweep matches the reference computation on random streams") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto events = random_stream(rng, 120);
    std::vector<double> times;
    for (int y = 1900; y <= 1960; y += 7) times.push_back(double(y));
    auto tables = sweep_snapshots(events, times, 2.0, DegreeMode::distinct);
    auto multi_tables = sweep_snapshots(events, times, 2.0, DegreeMode::multi);
    REQUIRE(tables.size() == times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      auto ref = oracle_at(events, times[i], 2.0);
      CHECK(tables[i].node_degrees.size() == ref.neighbors.size());
      for (const auto& [node, deg] : tables[i].node_degrees) {
        REQUIRE(ref.neighbors.count(node) == 1);
        CHECK(deg == static_cast<int>(ref.neighbors[node].size()));
      }
      CHECK(tables[i].active_pairs ==
            static_cast<std::int64_t>(ref.pairs.size()));
      CHECK(tables[i].active_intervals == ref.intervals);
      for (const auto& [node, deg] : multi_tables[i].node_degrees)
        CHECK(deg == ref.interval_degree[node]);
    }
  }
}

TEST_CASE("degree sum equals twice the active pair count") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto events = random_stream(rng, 150);
    std::vector<double> times = {1910.0, 1925.0, 1940.0, 1955.0};
    for (auto mode : {DegreeMode::distinct, DegreeMode::multi}) {
      auto tables = sweep_snapshots(events, times, 2.0, mode);
      for (const auto& table : tables) {
        std::int64_t sum = 0;
        for (const auto& [node, deg] : table.node_degrees) sum += deg;
        const std::int64_t expected = mode == DegreeMode::distinct
                                          ? table.active_pairs
                                          : table.active_intervals;
        CHECK(sum == 2 * expected);
      }
    }
  }
}

TEST_CASE("snapshots are independent of event ingestion order") {
  std::mt19937_64 rng(31);
  auto events = random_stream(rng, 200);
  std::vector<double> times = {1905.0, 1920.0, 1935.0, 1950.0};
  auto base = sweep_snapshots(events, times, 2.0);

  auto shuffled = events;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto again = sweep_snapshots(shuffled, times, 2.0);

  REQUIRE(base.size() == again.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].time == again[i].time);
    CHECK(base[i].node_degrees == again[i].node_degrees);
    CHECK(base[i].active_pairs == again[i].active_pairs);
    CHECK(base[i].active_intervals == again[i].active_intervals);
  }
}

TEST_CASE("edge intervals have exactly the window length on dyadic dates") {
  std::mt19937_64 rng(47);
  auto events = random_stream(rng, 300);
  for (const auto& e : events)
    for (const auto& iv : active_intervals(e, 2.0))
      CHECK(iv.active_until - iv.active_from == 2.0);
}

TEST_CASE("integer window covers a fixed number of integer snapshots") {
  std::mt19937_64 rng(59);
  auto events = random_stream(rng, 250);
  std::vector<double> times;
  for (int y = 1890; y <= 1965; ++y) times.push_back(double(y));

  auto count_snapshots = [&](const EdgeInterval& iv) {
    int n = 0;
    for (double t : times)
      if (iv.active_from <= t && t < iv.active_until) ++n;
    return n;
  };

  for (const auto& e : events) {
    for (const auto& iv : active_intervals(e, 2.0))
      CHECK(count_snapshots(iv) == 2);
    for (const auto& iv : active_intervals(e, 2.5)) {
      const int n = count_snapshots(iv);
      CHECK(n >= 2);
      CHECK(n <= 3);
    }
  }
}

TEST_CASE("sample_from_table sorts degrees and sets the year") {
  SnapshotTable table;
  table.time = 1950.0;
  table.node_degrees = {{"a", 3}, {"b", 1}, {"c", 2}};
  auto s = sample_from_table(table);
  CHECK(s.snapshot_year == 1950);
  CHECK(s.degrees == std::vector<int>{1, 2, 3});
}

TEST_CASE("cohort_of returns the earliest integer event year") {
  std::vector<CollaborationEvent> events = {
      make_event("e1", 1950.0, {"A", "B"}),
      make_event("e2", 1948.0, {"A", "C"}),
      make_event("e3", 1960.0, {"A", "D"}),
      make_event("e4", 2000.0, {"E"}),
  };
  CHECK(cohort_of("A", events) == 1948);
  CHECK(cohort_of("E", events) == 2000);
  CHECK_THROWS_AS(cohort_of("nobody", events), InputError);

  auto cohorts = cohort_map(events);
  CHECK(cohorts.at("A") == 1948);
  CHECK(cohorts.at("B") == 1950);
  CHECK(cohorts.at("D") == 1960);
  CHECK(cohorts.size() == 5);
}

TEST_CASE("single-node cohort yields N in {0, 1}") {
  // X debuts in 1950 with an older collaborator; the edge is live on
  // [1948, 1950) only.
  std::vector<CollaborationEvent> events = {
      make_event("old", 1940.0, {"Y", "Z"}),
      make_event("debut", 1950.0, {"X", "Y"}),
  };
  std::vector<int> years = {1947, 1948, 1949, 1950, 1951};
  auto samples = cohort_degree_samples(events, 1950, years, 2.0);
  REQUIRE(samples.size() == years.size());
  std::vector<std::int64_t> counts;
  for (const auto& s : samples) {
    counts.push_back(s.node_count());
    REQUIRE(s.cohort_year.has_value());
    CHECK(*s.cohort_year == 1950);
  }
  CHECK(counts == std::vector<std::int64_t>{0, 1, 1, 0, 0});
}

TEST_CASE("two-node cohort collaborating once both have degree one") {
  std::vector<CollaborationEvent> events = {
      make_event("only", 1950.0, {"P", "Q"}),
  };
  auto samples = cohort_degree_samples(events, 1950, {1948, 1949, 1950}, 2.0);
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].degrees == std::vector<int>{1, 1});
  CHECK(samples[1].degrees == std::vector<int>{1, 1});
  CHECK(samples[2].degrees.empty());  // edge expired at the event date
}

TEST_CASE("cohort year with no debuting nodes gives empty samples") {
  std::vector<CollaborationEvent> events = {
      make_event("e", 1950.0, {"P", "Q"}),
  };
  auto samples = cohort_degree_samples(events, 1960, {1949, 1950, 1961}, 2.0);
  for (const auto& s : samples) CHECK(s.node_count() == 0);
}

TEST_CASE("cohort samples agree with filtering a full snapshot") {
  std::mt19937_64 rng(71);
  auto events = random_stream(rng, 200);
  auto cohorts = cohort_map(events);
  const int cohort_year = 1920;
  std::vector<int> years = {1918, 1921, 1924, 1930};
  auto samples = cohort_degree_samples(events, cohort_year, years, 2.0);
  REQUIRE(samples.size() == years.size());
  for (std::size_t i = 0; i < years.size(); ++i) {
    auto tables = sweep_snapshots(events, {double(years[i])}, 2.0);
    std::vector<int> expected;
    for (const auto& [node, deg] : tables[0].node_degrees)
      if (cohorts.at(node) == cohort_year) expected.push_back(deg);
    std::sort(expected.begin(), expected.end());
    CHECK(samples[i].degrees == expected);
    CHECK(samples[i].snapshot_year == years[i]);
  }
}
