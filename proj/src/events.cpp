#include "collabnet/events.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include <zlib.h>

#include "collabnet/errors.hpp"
#include "json.hpp"

namespace collabnet {
namespace {

using json = nlohmann::json;

// Fixed 365-day calendar; leap days are folded into the year fraction.
constexpr int kCumulativeDays[12] = {0,   31,  59,  90,  120, 151,
                                     181, 212, 243, 273, 304, 334};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::optional<double> parse_iso_date(std::string_view s) {
  // YYYY-MM-DD
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) ||
      !all_digits(s.substr(8, 2)))
    return std::nullopt;
  int year = 0, month = 0, day = 0;
  std::from_chars(s.data(), s.data() + 4, year);
  std::from_chars(s.data() + 5, s.data() + 7, month);
  std::from_chars(s.data() + 8, s.data() + 10, day);
  if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
  const double day_of_year = kCumulativeDays[month - 1] + (day - 1);
  return year + day_of_year / 365.0;
}

std::optional<double> parse_numeric_year(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

// Reads one event record; returns the rejection reason on failure.
std::optional<std::string> record_from_json(const json& rec,
                                            const ParseOptions& opts,
                                            CollaborationEvent& out) {
  if (!rec.is_object()) return "record is not an object";
  if (!rec.contains("id") || !rec.contains("date") ||
      !rec.contains("participants"))
    return "missing field (need id, date, participants)";

  const json& id = rec["id"];
  if (id.is_string())
    out.id = id.get<std::string>();
  else if (id.is_number())
    out.id = id.dump();
  else
    return "id must be a string or number";
  if (out.id.empty()) return "empty id";

  const json& date = rec["date"];
  std::optional<double> parsed;
  if (date.is_number())
    parsed = date.get<double>();
  else if (date.is_string())
    parsed = parse_event_date(date.get<std::string>());
  if (!parsed) return "unparseable date";
  if (*parsed < opts.min_year || *parsed > opts.max_year) {
    std::ostringstream msg;
    msg << "date " << *parsed << " outside corpus range [" << opts.min_year
        << ", " << opts.max_year << "]";
    return msg.str();
  }
  out.date = *parsed;

  const json& parts = rec["participants"];
  if (!parts.is_array()) return "participants must be an array";
  out.participants.clear();
  out.participants.reserve(parts.size());
  for (const json& p : parts) {
    if (!p.is_string()) return "participant is not a string";
    std::string name = p.get<std::string>();
    if (name.empty()) return "empty participant name";
    out.participants.push_back(std::move(name));
  }
  // No self-edges: a contributor listed twice on one work counts once.
  std::sort(out.participants.begin(), out.participants.end());
  out.participants.erase(
      std::unique(out.participants.begin(), out.participants.end()),
      out.participants.end());
  if (out.participants.empty()) return "empty participants";
  return std::nullopt;
}

ParseResult parse_lines(const std::function<bool(std::string&)>& next_line,
                        const ParseOptions& opts) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(line)) {
    ++line_no;
    const auto begin = line.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) continue;  // blank line

    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) {
      result.rejected.push_back({line_no, "malformed record"});
      continue;
    }
    CollaborationEvent event;
    if (auto reason = record_from_json(rec, opts, event)) {
      result.rejected.push_back({line_no, std::move(*reason)});
      continue;
    }
    result.events.push_back(std::move(event));
  }
  return result;
}

}  // namespace

std::optional<double> parse_event_date(const std::string& text) {
  if (auto iso = parse_iso_date(text)) return iso;
  return parse_numeric_year(text);
}

ParseResult parse_events(std::istream& in, const ParseOptions& opts) {
  return parse_lines(
      [&in](std::string& line) { return static_cast<bool>(std::getline(in, line)); },
      opts);
}

ParseResult parse_events_file(const std::string& path, const ParseOptions& opts) {
  if (path.size() > 3 && path.ends_with(".gz")) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (gz == nullptr) throw InputError("cannot open " + path);
    std::string pending;
    char buf[1 << 16];
    auto next_line = [&](std::string& line) {
      while (true) {
        const auto nl = pending.find('\n');
        if (nl != std::string::npos) {
          line = pending.substr(0, nl);
          pending.erase(0, nl + 1);
          return true;
        }
        const int got = gzread(gz, buf, sizeof(buf));
        if (got < 0) throw InputError("gzip read error in " + path);
        if (got == 0) {
          if (pending.empty()) return false;
          line = std::move(pending);
          pending.clear();
          return true;
        }
        pending.append(buf, static_cast<std::size_t>(got));
      }
    };
    ParseResult result = parse_lines(next_line, opts);
    gzclose(gz);
    return result;
  }

  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_events(in, opts);
}

std::vector<NodePair> pairwise_edges(const CollaborationEvent& event) {
  const auto& p = event.participants;
  const std::size_t n = p.size();
  std::vector<NodePair> pairs;
  if (n < 2) return pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(p[i], p[j]);
  return pairs;
}

}  // namespace collabnet
