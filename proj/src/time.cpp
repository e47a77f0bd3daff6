#include "locproof/time.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "locproof/error.hpp"

namespace locproof {

namespace {

using std::chrono::days;
using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::seconds;
using std::chrono::sys_days;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

int parse_int_field(std::string_view s, std::string_view what) {
  if (!all_digits(s)) {
    throw Error(Errc::ParseError, std::string(what),
                "expected digits in " + std::string(what) + ": '" +
                    std::string(s) + "'");
  }
  int value = 0;
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

/// UTC instant of the last Sunday of `month` in `year`, at 01:00.
Timestamp last_sunday_at_one(int year, unsigned month) {
  using namespace std::chrono;
  year_month_day_last last{std::chrono::year{year} / std::chrono::month{month} /
                           std::chrono::last};
  sys_days day{last};
  weekday wd{day};
  day -= days{(wd - Sunday).count()};
  return Timestamp{day.time_since_epoch()} + hours{1};
}

}  // namespace

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Epoch:
      return "EPOCH";
    case WindowKind::Period:
      return "PERIOD";
    case WindowKind::Span:
      return "SPAN";
  }
  return "SPAN";
}

WindowKind window_kind_from_string(std::string_view s) {
  if (s == "EPOCH") return WindowKind::Epoch;
  if (s == "PERIOD") return WindowKind::Period;
  if (s == "SPAN") return WindowKind::Span;
  throw Error(Errc::ParseError, "kind",
              "unknown window kind '" + std::string(s) + "'");
}

TimeWindow make_window(Timestamp start, Timestamp end, WindowKind kind) {
  if (start > end) {
    throw Error(Errc::ConfigInvalid,
                "window start " + format_utc(start) + " is after end " +
                    format_utc(end));
  }
  return TimeWindow{start, end, kind};
}

bool window_hierarchy_ok(const TimeWindow& epoch, const TimeWindow& period,
                         const TimeWindow& span) {
  if (epoch.kind != WindowKind::Epoch || period.kind != WindowKind::Period ||
      span.kind != WindowKind::Span) {
    throw Error(Errc::KindMismatch,
                "expected (EPOCH, PERIOD, SPAN), got (" +
                    std::string(to_string(epoch.kind)) + ", " +
                    std::string(to_string(period.kind)) + ", " +
                    std::string(to_string(span.kind)) + ")");
  }
  return epoch.duration() > period.duration() &&
         period.duration() > span.duration();
}

Timestamp civil_to_utc(const CivilTime& c) {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{c.year},
                     std::chrono::month{static_cast<unsigned>(c.month)},
                     std::chrono::day{static_cast<unsigned>(c.day)}};
  if (!ymd.ok()) {
    throw Error(Errc::InvalidTimestamp, "invalid calendar date");
  }
  if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59 ||
      c.second < 0 || c.second > 60) {
    throw Error(Errc::InvalidTimestamp, "invalid time of day");
  }
  sys_days d{ymd};
  return Timestamp{d.time_since_epoch()} + hours{c.hour} + minutes{c.minute} +
         seconds{std::min(c.second, 59)};
}

CivilTime utc_to_civil(Timestamp t) {
  using namespace std::chrono;
  sys_days d = floor<days>(t);
  year_month_day ymd{d};
  seconds rest = t - d;
  CivilTime c;
  c.year = static_cast<int>(ymd.year());
  c.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  c.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
  c.hour = static_cast<int>(rest.count() / 3600);
  c.minute = static_cast<int>((rest.count() % 3600) / 60);
  c.second = static_cast<int>(rest.count() % 60);
  return c;
}

std::string format_utc(Timestamp t) {
  CivilTime c = utc_to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year,
                c.month, c.day, c.hour, c.minute, c.second);
  return buf;
}

Timestamp parse_utc(std::string_view text) {
  // YYYY-MM-DD[T ]HH:MM:SS[Z]
  if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) {
    text.remove_suffix(1);
  }
  if (text.size() != 19 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
      text[16] != ':') {
    throw Error(Errc::ParseError, "timestamp",
                "expected YYYY-MM-DDTHH:MM:SS[Z], got '" + std::string(text) +
                    "'");
  }
  CivilTime c;
  c.year = parse_int_field(text.substr(0, 4), "year");
  c.month = parse_int_field(text.substr(5, 2), "month");
  c.day = parse_int_field(text.substr(8, 2), "day");
  c.hour = parse_int_field(text.substr(11, 2), "hour");
  c.minute = parse_int_field(text.substr(14, 2), "minute");
  c.second = parse_int_field(text.substr(17, 2), "second");
  return civil_to_utc(c);
}

Timestamp parse_point(std::string_view text) {
  if (text.size() == 10) {
    CivilTime c;
    if (text[4] != '-' || text[7] != '-') {
      throw Error(Errc::ParseError, "date",
                  "expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    c.year = parse_int_field(text.substr(0, 4), "year");
    c.month = parse_int_field(text.substr(5, 2), "month");
    c.day = parse_int_field(text.substr(8, 2), "day");
    return civil_to_utc(c);
  }
  return parse_utc(text);
}

Duration lisbon_offset(Timestamp utc) {
  CivilTime c = utc_to_civil(utc);
  Timestamp dst_start = last_sunday_at_one(c.year, 3);
  Timestamp dst_end = last_sunday_at_one(c.year, 10);
  if (utc >= dst_start && utc < dst_end) {
    return Duration{3600};
  }
  return Duration{0};
}

Timestamp lisbon_to_utc(const CivilTime& local) {
  Timestamp naive = civil_to_utc(local);
  Timestamp summer = naive - Duration{3600};
  if (lisbon_offset(summer) == Duration{3600}) {
    return summer;
  }
  return naive;
}

CivilTime utc_to_lisbon(Timestamp utc) {
  return utc_to_civil(utc + lisbon_offset(utc));
}

std::chrono::milliseconds parse_duration_ms(std::string_view text) {
  if (text.empty()) {
    throw Error(Errc::ParseError, "duration", "empty duration");
  }
  auto parse_number = [](std::string_view s, std::string_view what) -> double {
    if (s.empty()) {
      throw Error(Errc::ParseError, std::string(what), "missing number");
    }
    char* end = nullptr;
    std::string owned(s);
    double value = std::strtod(owned.c_str(), &end);
    if (end != owned.c_str() + owned.size() || value < 0 ||
        !std::isfinite(value)) {
      throw Error(Errc::ParseError, std::string(what),
                  "bad duration number '" + owned + "'");
    }
    return value;
  };

  if (text[0] != 'P' && text[0] != 'p') {
    double secs = parse_number(text, "duration");
    return std::chrono::milliseconds{
        static_cast<long long>(std::llround(secs * 1000.0))};
  }

  // ISO-8601: P[nD][T[nH][nM][nS]]
  double total_ms = 0;
  bool in_time = false;
  std::size_t i = 1;
  std::size_t num_start = i;
  while (i < text.size()) {
    char c = text[i];
    if (c == 'T' || c == 't') {
      if (num_start != i) {
        throw Error(Errc::ParseError, "duration",
                    "dangling number before T in '" + std::string(text) + "'");
      }
      in_time = true;
      ++i;
      num_start = i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      ++i;
      continue;
    }
    double value = parse_number(text.substr(num_start, i - num_start),
                                "duration");
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'D':
        total_ms += value * 86400.0 * 1000.0;
        break;
      case 'H':
        total_ms += value * 3600.0 * 1000.0;
        break;
      case 'M':
        if (!in_time) {
          throw Error(Errc::ParseError, "duration",
                      "calendar months are not supported in '" +
                          std::string(text) + "'");
        }
        total_ms += value * 60.0 * 1000.0;
        break;
      case 'S':
        total_ms += value * 1000.0;
        break;
      default:
        throw Error(Errc::ParseError, "duration",
                    "unknown duration unit in '" + std::string(text) + "'");
    }
    ++i;
    num_start = i;
  }
  if (num_start != i) {
    throw Error(Errc::ParseError, "duration",
                "trailing number without unit in '" + std::string(text) + "'");
  }
  return std::chrono::milliseconds{
      static_cast<long long>(std::llround(total_ms))};
}

Duration parse_duration(std::string_view text) {
  auto ms = parse_duration_ms(text);
  if (ms.count() % 1000 != 0) {
    throw Error(Errc::ParseError, "duration",
                "duration '" + std::string(text) +
                    "' is not a whole number of seconds");
  }
  return std::chrono::duration_cast<Duration>(ms);
}

std::string format_duration(Duration d) {
  return "PT" + std::to_string(d.count()) + "S";
}

Timestamp now_utc() {
  return std::chrono::floor<Duration>(std::chrono::system_clock::now());
}

}  // namespace locproof
