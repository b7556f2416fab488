#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "collabnet/events.hpp"

namespace collabnet {

/// distinct: degree = number of distinct active collaborators (multi-edges
/// collapse). multi: every active edge interval counts.
enum class DegreeMode { distinct, multi };

/// One collaboration edge together with its activity window
/// [date - window, date).
struct EdgeInterval {
  std::string a, b;  // canonical endpoint order, a < b
  double active_from = 0.0;
  double active_until = 0.0;
};

/// Multiset of node degrees at one snapshot instant. Isolated nodes are
/// excluded, so every degree is >= 1 and |degrees| is the node count N.
struct DegreeSample {
  int snapshot_year = 0;
  std::vector<int> degrees;  // sorted ascending
  std::optional<int> cohort_year;

  std::int64_t node_count() const {
    return static_cast<std::int64_t>(degrees.size());
  }
};

/// Per-node degree table for one snapshot, for file export.
struct SnapshotTable {
  double time = 0.0;
  std::vector<std::pair<std::string, int>> node_degrees;  // sorted by node id
  std::int64_t active_pairs = 0;      // distinct node pairs with a live edge
  std::int64_t active_intervals = 0;  // live edge intervals, with multiplicity
};

std::vector<EdgeInterval> active_intervals(const CollaborationEvent& event,
                                           double window_years);

/// Degrees at each requested instant, computed with one sweep over the edge
/// intervals. Results are returned sorted by time and are independent of the
/// ingestion order of `events`.
std::vector<SnapshotTable> sweep_snapshots(
    const std::vector<CollaborationEvent>& events, std::vector<double> times,
    double window_years, DegreeMode mode = DegreeMode::distinct);

DegreeSample degree_snapshot(const std::vector<CollaborationEvent>& events,
                             double year, double window_years,
                             DegreeMode mode = DegreeMode::distinct);

DegreeSample sample_from_table(const SnapshotTable& table);

/// Integer year of the node's earliest event. Throws InputError for a node
/// that appears in no event.
int cohort_of(const std::string& node,
              const std::vector<CollaborationEvent>& events);

/// First-activity year for every node in the stream.
std::unordered_map<std::string, int> cohort_map(
    const std::vector<CollaborationEvent>& events);

/// Yearly degree samples restricted to nodes whose first activity falls in
/// `cohort_year`. Snapshot years with no active cohort member yield N = 0.
std::vector<DegreeSample> cohort_degree_samples(
    const std::vector<CollaborationEvent>& events, int cohort_year,
    const std::vector<int>& snapshot_years, double window_years,
    DegreeMode mode = DegreeMode::distinct);

}  // namespace collabnet
