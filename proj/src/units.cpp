#include "halving/units.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace halving {

namespace {

namespace chr = std::chrono;

// Bound of +-9999 years around 1970 in minutes, well inside the int64 range.
constexpr double kMaxAbsMinutes = 8030.0 * 365.25 * 1440.0;

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
  if (pos + len > text.size()) throw std::invalid_argument("timestamp too short: " + std::string(text));
  int value = 0;
  auto first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len)
    throw std::invalid_argument("malformed timestamp: " + std::string(text));
  return value;
}

void expect_char(std::string_view text, std::size_t pos, std::string_view allowed) {
  if (pos >= text.size() || allowed.find(text[pos]) == std::string_view::npos)
    throw std::invalid_argument("malformed timestamp: " + std::string(text));
}

}  // namespace

Timestamp add_duration(Timestamp t, Duration d) {
  if (!std::isfinite(d.minutes)) throw std::out_of_range("non-finite duration");
  const double whole = std::round(d.minutes);
  const double result = static_cast<double>(t.time_since_epoch().count()) + whole;
  if (std::abs(result) > kMaxAbsMinutes) throw std::out_of_range("timestamp out of representable range");
  return t + chr::minutes{static_cast<long long>(whole)};
}

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DD?HH:MM[:SS][Z]
  const int y = parse_field(text, 0, 4);
  expect_char(text, 4, "-");
  const int mo = parse_field(text, 5, 2);
  expect_char(text, 7, "-");
  const int dd = parse_field(text, 8, 2);
  expect_char(text, 10, "T ");
  const int hh = parse_field(text, 11, 2);
  expect_char(text, 13, ":");
  const int mi = parse_field(text, 14, 2);
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    (void)parse_field(text, pos + 1, 2);
    pos += 3;
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) throw std::invalid_argument("trailing characters in timestamp: " + std::string(text));

  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(mo)}, chr::day{static_cast<unsigned>(dd)}};
  if (!ymd.ok() || hh > 23 || mi > 59) throw std::invalid_argument("invalid date/time: " + std::string(text));
  return chr::time_point_cast<chr::minutes>(chr::sys_days{ymd}) + chr::hours{hh} + chr::minutes{mi};
}

std::string format_timestamp(Timestamp t) {
  const auto day_start = chr::floor<chr::days>(t);
  const chr::year_month_day ymd{day_start};
  const chr::hh_mm_ss hms{t - day_start};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()));
  return buf;
}

Timestamp from_unix_seconds(long long s) {
  return chr::floor<chr::minutes>(chr::sys_seconds{chr::seconds{s}});
}

long long to_unix_seconds(Timestamp t) {
  return chr::duration_cast<chr::seconds>(t.time_since_epoch()).count();
}

std::string format_duration(Duration d) {
  long long total = std::llround(d.minutes);
  std::string out;
  if (total < 0) {
    out = "-";
    total = -total;
  }
  const long long dd = total / 1440;
  const long long hh = (total % 1440) / 60;
  const long long mm = total % 60;
  std::string body;
  auto append = [&body](long long v, const char* unit) {
    if (v == 0) return;
    if (!body.empty()) body += '+';
    body += std::to_string(v) + unit;
  };
  append(dd, "day");
  append(hh, "hr");
  append(mm, "min");
  if (body.empty()) body = "0min";
  return out + body;
}

std::string_view unit_name(TimeUnit u) {
  switch (u) {
    case TimeUnit::minute: return "minute";
    case TimeUnit::hour: return "hour";
    case TimeUnit::day: return "day";
    case TimeUnit::week: return "week";
    case TimeUnit::month: return "month";
    case TimeUnit::year: return "year";
  }
  return "minute";
}

TimeUnit parse_unit(std::string_view name) {
  for (auto u : {TimeUnit::minute, TimeUnit::hour, TimeUnit::day, TimeUnit::week, TimeUnit::month, TimeUnit::year})
    if (unit_name(u) == name) return u;
  throw std::invalid_argument("unknown time unit: " + std::string(name));
}

}  // namespace halving
