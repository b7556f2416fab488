#include "collabnet/temporal_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "collabnet/errors.hpp"

namespace collabnet {

namespace {

// Interned edge event for the sweep: +1 at window opening, -1 at closing.
struct EdgeDelta {
  double time;
  int u, v;  // interned node ids, u < v
  int delta;
};

struct NodeInterner {
  std::unordered_map<std::string, int> ids;
  std::vector<const std::string*> names;

  int intern(const std::string& name) {
    auto [it, inserted] = ids.try_emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(&it->first);
    return it->second;
  }
};

}  // namespace

std::vector<EdgeInterval> active_intervals(const CollaborationEvent& event,
                                           double window_years) {
  if (!(window_years > 0.0))
    throw InputError("window length must be positive");
  std::vector<EdgeInterval> out;
  for (auto& [a, b] : pairwise_edges(event)) {
    out.push_back({a, b, event.date - window_years, event.date});
  }
  return out;
}

std::vector<SnapshotTable> sweep_snapshots(
    const std::vector<CollaborationEvent>& events, std::vector<double> times,
    double window_years, DegreeMode mode) {
  if (!(window_years > 0.0))
    throw InputError("window length must be positive");

  std::sort(times.begin(), times.end());

  NodeInterner interner;
  std::vector<EdgeDelta> deltas;
  for (const auto& ev : events) {
    for (std::size_t i = 0; i < ev.participants.size(); ++i) {
      for (std::size_t j = i + 1; j < ev.participants.size(); ++j) {
        int u = interner.intern(ev.participants[i]);
        int v = interner.intern(ev.participants[j]);
        if (u > v) std::swap(u, v);
        deltas.push_back({ev.date - window_years, u, v, +1});
        deltas.push_back({ev.date, u, v, -1});
      }
    }
  }
  // Closings sort before openings at the same instant: the interval is
  // half-open, [date - w, date), so an edge expiring exactly at the snapshot
  // time must already be gone, and one opening there must be counted.
  std::sort(deltas.begin(), deltas.end(),
            [](const EdgeDelta& x, const EdgeDelta& y) {
              if (x.time != y.time) return x.time < y.time;
              if (x.delta != y.delta) return x.delta < y.delta;
              if (x.u != y.u) return x.u < y.u;
              return x.v < y.v;
            });

  const int n_nodes = static_cast<int>(interner.names.size());
  std::vector<int> degree(n_nodes, 0);  // per-mode degree
  std::unordered_map<std::int64_t, std::int64_t> mult;
  std::int64_t active_pairs = 0;
  std::int64_t live_intervals = 0;

  auto pair_key = [n_nodes](int u, int v) {
    return static_cast<std::int64_t>(u) * n_nodes + v;
  };

  std::vector<SnapshotTable> out;
  out.reserve(times.size());
  std::size_t cursor = 0;
  for (double t : times) {
    while (cursor < deltas.size() && deltas[cursor].time <= t) {
      const auto& d = deltas[cursor++];
      auto key = pair_key(d.u, d.v);
      auto& m = mult[key];
      std::int64_t before = m;
      m += d.delta;
      live_intervals += d.delta;
      if (before == 0 && m == 1) ++active_pairs;
      if (before == 1 && m == 0) --active_pairs;
      if (mode == DegreeMode::multi) {
        degree[d.u] += d.delta;
        degree[d.v] += d.delta;
      } else {
        if (before == 0 && m == 1) {
          ++degree[d.u];
          ++degree[d.v];
        } else if (before == 1 && m == 0) {
          --degree[d.u];
          --degree[d.v];
        }
      }
    }

    SnapshotTable table;
    table.time = t;
    table.active_pairs = active_pairs;
    table.active_intervals = live_intervals;
    for (int i = 0; i < n_nodes; ++i) {
      if (degree[i] > 0) table.node_degrees.emplace_back(*interner.names[i], degree[i]);
    }
    std::sort(table.node_degrees.begin(), table.node_degrees.end());
    out.push_back(std::move(table));
  }
  return out;
}

DegreeSample sample_from_table(const SnapshotTable& table) {
  DegreeSample s;
  s.snapshot_year = static_cast<int>(std::floor(table.time));
  s.degrees.reserve(table.node_degrees.size());
  for (const auto& [node, d] : table.node_degrees) s.degrees.push_back(d);
  std::sort(s.degrees.begin(), s.degrees.end());
  return s;
}

DegreeSample degree_snapshot(const std::vector<CollaborationEvent>& events,
                             double year, double window_years,
                             DegreeMode mode) {
  auto tables = sweep_snapshots(events, {year}, window_years, mode);
  return sample_from_table(tables.front());
}

int cohort_of(const std::string& node,
              const std::vector<CollaborationEvent>& events) {
  double earliest = std::numeric_limits<double>::infinity();
  for (const auto& ev : events) {
    if (std::find(ev.participants.begin(), ev.participants.end(), node) !=
        ev.participants.end()) {
      earliest = std::min(earliest, ev.date);
    }
  }
  if (!std::isfinite(earliest))
    throw InputError("node '" + node + "' appears in no event");
  return static_cast<int>(std::floor(earliest));
}

std::unordered_map<std::string, int> cohort_map(
    const std::vector<CollaborationEvent>& events) {
  std::unordered_map<std::string, double> earliest;
  for (const auto& ev : events) {
    for (const auto& p : ev.participants) {
      auto [it, inserted] = earliest.try_emplace(p, ev.date);
      if (!inserted && ev.date < it->second) it->second = ev.date;
    }
  }
  std::unordered_map<std::string, int> out;
  out.reserve(earliest.size());
  for (const auto& [node, t] : earliest)
    out.emplace(node, static_cast<int>(std::floor(t)));
  return out;
}

std::vector<DegreeSample> cohort_degree_samples(
    const std::vector<CollaborationEvent>& events, int cohort_year,
    const std::vector<int>& snapshot_years, double window_years,
    DegreeMode mode) {
  auto cohorts = cohort_map(events);

  std::vector<double> times(snapshot_years.begin(), snapshot_years.end());
  auto tables = sweep_snapshots(events, times, window_years, mode);

  std::vector<int> years_sorted = snapshot_years;
  std::sort(years_sorted.begin(), years_sorted.end());

  std::vector<DegreeSample> out;
  out.reserve(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    DegreeSample s;
    s.snapshot_year = years_sorted[i];
    s.cohort_year = cohort_year;
    for (const auto& [node, d] : tables[i].node_degrees) {
      auto it = cohorts.find(node);
      if (it != cohorts.end() && it->second == cohort_year)
        s.degrees.push_back(d);
    }
    std::sort(s.degrees.begin(), s.degrees.end());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace collabnet
