#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace locproof {

/// UTC timestamps at second precision.
using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

enum class WindowKind { Epoch, Period, Span };

std::string_view to_string(WindowKind kind);
WindowKind window_kind_from_string(std::string_view s);

/// Closed time interval [start, end]; membership is inclusive on both ends.
struct TimeWindow {
  Timestamp start{};
  Timestamp end{};
  WindowKind kind = WindowKind::Span;

  bool contains(Timestamp t) const noexcept { return t >= start && t <= end; }
  Duration duration() const noexcept { return end - start; }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Validating constructor; throws ConfigInvalid when start > end.
TimeWindow make_window(Timestamp start, Timestamp end, WindowKind kind);

/// True iff duration(epoch) > duration(period) > duration(span).
/// Throws KindMismatch when the three windows do not carry their kinds.
bool window_hierarchy_ok(const TimeWindow& epoch, const TimeWindow& period,
                         const TimeWindow& span);

struct CivilTime {
  int year = 0;
  int month = 0;  // 1..12
  int day = 0;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

Timestamp civil_to_utc(const CivilTime& c);
CivilTime utc_to_civil(Timestamp t);

std::string format_utc(Timestamp t);  // "2019-07-19T10:30:00Z"
Timestamp parse_utc(std::string_view text);
/// Accepts "YYYY-MM-DD" (midnight) or a full timestamp.
Timestamp parse_point(std::string_view text);

/// Europe/Lisbon offset (WET/WEST) at a UTC instant: +1h between the last
/// Sunday of March 01:00 UTC and the last Sunday of October 01:00 UTC.
Duration lisbon_offset(Timestamp utc);
/// Interprets civil fields as Europe/Lisbon local time. During the autumn
/// overlap the summer (+1h) reading wins; during the spring gap the winter
/// reading is used.
Timestamp lisbon_to_utc(const CivilTime& local);
CivilTime utc_to_lisbon(Timestamp utc);

/// Parses ISO-8601 durations ("P7D", "PT15M", "PT1.875M") or plain seconds
/// ("900", "112.5"). Fractions are kept to millisecond resolution.
std::chrono::milliseconds parse_duration_ms(std::string_view text);
/// Same, but requires a whole number of seconds.
Duration parse_duration(std::string_view text);
std::string format_duration(Duration d);  // "PT900S"

Timestamp now_utc();

}  // namespace locproof
