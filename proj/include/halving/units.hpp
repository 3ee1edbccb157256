#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace halving {

/// A span of time in real-valued minutes. Negative values only appear as
/// signed schedule shifts; estimator outputs are always non-negative.
struct Duration {
  double minutes = 0.0;

  constexpr Duration() = default;
  constexpr explicit Duration(double m) : minutes(m) {}

  constexpr Duration& operator+=(Duration o) { minutes += o.minutes; return *this; }
  constexpr Duration& operator-=(Duration o) { minutes -= o.minutes; return *this; }

  friend constexpr Duration operator+(Duration a, Duration b) { return Duration{a.minutes + b.minutes}; }
  friend constexpr Duration operator-(Duration a, Duration b) { return Duration{a.minutes - b.minutes}; }
  friend constexpr Duration operator-(Duration a) { return Duration{-a.minutes}; }
  friend constexpr Duration operator*(double s, Duration d) { return Duration{s * d.minutes}; }
  friend constexpr Duration operator*(Duration d, double s) { return Duration{s * d.minutes}; }
  friend constexpr Duration operator/(Duration d, double s) { return Duration{d.minutes / s}; }
  friend constexpr auto operator<=>(Duration, Duration) = default;
};

enum class TimeUnit { minute, hour, day, week, month, year };

/// Minutes per unit. Month and year are the rounded table values
/// (43830 and 526000), not calendar-exact.
constexpr double minutes_per(TimeUnit u) {
  switch (u) {
    case TimeUnit::minute: return 1.0;
    case TimeUnit::hour: return 60.0;
    case TimeUnit::day: return 1440.0;
    case TimeUnit::week: return 10080.0;
    case TimeUnit::month: return 43830.0;
    case TimeUnit::year: return 526000.0;
  }
  return 1.0;
}

constexpr double to_unit(Duration d, TimeUnit u) { return d.minutes / minutes_per(u); }
constexpr Duration from_unit(double value, TimeUnit u) { return Duration{value * minutes_per(u)}; }

constexpr Duration minutes(double m) { return Duration{m}; }
constexpr Duration hours(double h) { return from_unit(h, TimeUnit::hour); }
constexpr Duration days(double d) { return from_unit(d, TimeUnit::day); }
constexpr Duration weeks(double w) { return from_unit(w, TimeUnit::week); }

/// UTC instant at one-minute resolution.
using Timestamp = std::chrono::sys_time<std::chrono::minutes>;

/// Adds a duration rounded to the nearest whole minute.
/// Throws std::out_of_range when the result leaves years [-9999, 9999].
Timestamp add_duration(Timestamp t, Duration d);

/// Parses "YYYY-MM-DD HH:MM", "YYYY-MM-DDTHH:MM", optionally followed by
/// ":SS" and/or a trailing "Z". Seconds are truncated.
/// Throws std::invalid_argument on malformed input.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DD HH:MM" in UTC.
std::string format_timestamp(Timestamp t);

Timestamp from_unix_seconds(long long seconds);
long long to_unix_seconds(Timestamp t);

/// Renders a duration in mixed units, e.g. "38day+40min" or "12hr+20min",
/// after rounding to the nearest minute. Zero renders as "0min".
std::string format_duration(Duration d);

std::string_view unit_name(TimeUnit u);
/// Accepts the singular names used by unit_name ("hour", "day", ...).
TimeUnit parse_unit(std::string_view name);

}  // namespace halving
