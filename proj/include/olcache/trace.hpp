#ifndef OLCACHE_TRACE_HPP
#define OLCACHE_TRACE_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "olcache/core_model.hpp"
#include "olcache/error.hpp"

namespace olcache {

// One `UserID::MovieID::Rating::Timestamp` row.
struct RawEvent {
  std::int64_t user_id = 0;
  std::int64_t movie_id = 0;
  double rating = 0.0;
  std::int64_t timestamp = 0;

  friend bool operator==(const RawEvent&, const RawEvent&) = default;
};

enum class TraceOrder { file_order, timestamp };

inline TraceOrder parse_trace_order(std::string_view s) {
  if (s == "file" || s == "file-order") return TraceOrder::file_order;
  if (s == "timestamp") return TraceOrder::timestamp;
  throw Error(ErrorCode::unknown_kind, "unknown trace order '" + std::string(s) + "'");
}

struct Trace {
  std::vector<FileId> requests;
  std::size_t library_size = 0;
  std::unordered_map<std::int64_t, FileId> id_map;  // raw movie ID -> dense ID
  std::vector<std::int64_t> raw_ids;                // dense ID -> raw movie ID
};

namespace detail {

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace detail

inline RawEvent parse_event_line(std::string_view line, std::size_t line_no,
                                 std::string_view delimiter = "::") {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t hit = line.find(delimiter, pos);
    fields.push_back(line.substr(pos, hit == std::string_view::npos ? hit : hit - pos));
    if (hit == std::string_view::npos) break;
    pos = hit + delimiter.size();
  }
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + why + " in '" +
                                       std::string(line) + "'");
  };
  if (fields.size() != 4) throw fail("expected 4 fields");
  RawEvent e;
  if (!detail::parse_number(fields[0], e.user_id)) throw fail("bad user id");
  if (!detail::parse_number(fields[1], e.movie_id) || e.movie_id < 1) throw fail("bad movie id");
  if (!detail::parse_number(fields[2], e.rating)) throw fail("bad rating");
  if (!detail::parse_number(fields[3], e.timestamp) || e.timestamp < 0) throw fail("bad timestamp");
  return e;
}

// Reads up to max_rows rows in file order. Blank lines are skipped.
inline std::vector<RawEvent> parse_movielens(const std::string& path,
                                             std::optional<std::size_t> max_rows = std::nullopt,
                                             std::string_view delimiter = "::") {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::vector<RawEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while ((!max_rows || events.size() < *max_rows) && std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    events.push_back(parse_event_line(line, line_no, delimiter));
  }
  if (in.bad()) throw Error(ErrorCode::io, "read failure on '" + path + "'");
  return events;
}

// Dense IDs by first appearance in the chosen order.
inline Trace remap_ids(std::vector<RawEvent> events, TraceOrder order = TraceOrder::file_order) {
  if (events.empty()) throw Error(ErrorCode::empty_trace, "no events to remap");
  if (order == TraceOrder::timestamp) {
    std::stable_sort(events.begin(), events.end(),
                     [](const RawEvent& a, const RawEvent& b) { return a.timestamp < b.timestamp; });
  }
  Trace trace;
  trace.requests.reserve(events.size());
  for (const RawEvent& e : events) {
    auto [it, inserted] = trace.id_map.try_emplace(e.movie_id, trace.raw_ids.size());
    if (inserted) trace.raw_ids.push_back(e.movie_id);
    trace.requests.push_back(it->second);
  }
  trace.library_size = trace.raw_ids.size();
  return trace;
}

struct TraceStats {
  std::size_t length = 0;
  std::size_t library_size = 0;
  std::vector<std::pair<FileId, std::uint64_t>> top;  // (dense ID, count), most requested first
};

inline TraceStats trace_stats(const Trace& trace, std::size_t k = 10) {
  TraceStats stats;
  stats.length = trace.requests.size();
  stats.library_size = trace.library_size;
  if (trace.requests.empty()) return stats;
  std::vector<std::uint64_t> counts(trace.library_size, 0);
  for (FileId f : trace.requests) ++counts[f];
  std::vector<FileId> ids(counts.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](FileId a, FileId b) {
                      return counts[a] != counts[b] ? counts[a] > counts[b] : a < b;
                    });
  for (std::size_t i = 0; i < k; ++i) stats.top.emplace_back(ids[i], counts[ids[i]]);
  return stats;
}

inline void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << "slot,file_id\n";
  for (std::size_t i = 0; i < trace.requests.size(); ++i) {
    out << (i + 1) << ',' << trace.requests[i] << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "write failure on '" + path + "'");
}

}  // namespace olcache

#endif  // OLCACHE_TRACE_HPP
