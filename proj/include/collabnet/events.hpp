#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace collabnet {

/// One collaboration (paper, movie, ...). Participants are deduplicated and
/// kept sorted, so derived edge lists are canonical.
struct CollaborationEvent {
  std::string id;
  double date = 0.0;  // calendar year; fractional part encodes day-of-year
  std::vector<std::string> participants;

  int participant_count() const { return static_cast<int>(participants.size()); }
};

struct ParseIssue {
  std::size_t line = 0;
  std::string reason;
};

struct ParseOptions {
  double min_year = 1700.0;
  double max_year = 2100.0;
};

struct ParseResult {
  std::vector<CollaborationEvent> events;   // input order
  std::vector<ParseIssue> rejected;         // one entry per bad line
};

/// Parse line-delimited JSON records {"id":..., "date":..., "participants":[...]}.
/// Bad lines are collected in ParseResult::rejected, never thrown.
ParseResult parse_events(std::istream& in, const ParseOptions& opts = {});

/// File variant; reads gzip-compressed input when the path ends in ".gz".
ParseResult parse_events_file(const std::string& path, const ParseOptions& opts = {});

/// Accepts "1950", "1950.5" and "1950-07-01"; day-level dates are reduced to
/// year + fraction-of-year on a fixed 365-day calendar. Empty on failure.
std::optional<double> parse_event_date(const std::string& text);

using NodePair = std::pair<std::string, std::string>;

/// All n(n-1)/2 unordered participant pairs, each pair (a,b) with a < b,
/// listed in lexicographic order. A single participant yields no pairs.
std::vector<NodePair> pairwise_edges(const CollaborationEvent& event);

}  // namespace collabnet
