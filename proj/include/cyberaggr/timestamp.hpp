/*
 * Copyright 2026 The cyberaggr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace cyberaggr {

using Timestamp = std::chrono::sys_seconds;

// Offset applied to timestamps that carry no zone designator (UTC+8).
inline constexpr std::chrono::minutes kDefaultSourceOffset{8 * 60};

struct ParsedTimestamp {
  Timestamp utc;
  bool had_zone = false;
};

namespace detail {

inline bool parse_digits(std::string_view s, std::size_t pos, std::size_t n,
                         int& out) {
  if (pos + n > s.size()) return false;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + n, out);
  return ec == std::errc{} && ptr == s.data() + pos + n;
}

}  // namespace detail

/// Parses "YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z|+HH:MM|+HHMM|+HH]".
/// Fractional seconds are truncated. Zone-less values are read as local time
/// at `naive_offset` and converted to UTC.
inline std::optional<ParsedTimestamp> parse_timestamp(
    std::string_view s,
    std::chrono::minutes naive_offset = kDefaultSourceOffset) {
  using namespace std::chrono;
  int y, mo, d, h, mi, sec = 0;
  if (!detail::parse_digits(s, 0, 4, y) || s.size() < 16 || s[4] != '-' ||
      !detail::parse_digits(s, 5, 2, mo) || s[7] != '-' ||
      !detail::parse_digits(s, 8, 2, d) || (s[10] != 'T' && s[10] != ' ') ||
      !detail::parse_digits(s, 11, 2, h) || s[13] != ':' ||
      !detail::parse_digits(s, 14, 2, mi)) {
    return std::nullopt;
  }
  std::size_t pos = 16;
  if (pos < s.size() && s[pos] == ':') {
    if (!detail::parse_digits(s, pos + 1, 2, sec)) return std::nullopt;
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      const std::size_t start = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == start) return std::nullopt;
    }
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;

  minutes offset = naive_offset;
  bool had_zone = false;
  if (pos < s.size()) {
    if (s[pos] == 'Z' || s[pos] == 'z') {
      offset = minutes{0};
      had_zone = true;
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const int sign = s[pos] == '-' ? -1 : 1;
      int oh = 0, om = 0;
      if (!detail::parse_digits(s, pos + 1, 2, oh)) return std::nullopt;
      pos += 3;
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (pos < s.size()) {
        if (!detail::parse_digits(s, pos, 2, om)) return std::nullopt;
        pos += 2;
      }
      if (oh > 14 || om > 59) return std::nullopt;
      offset = minutes{sign * (oh * 60 + om)};
      had_zone = true;
    }
  }
  if (pos != s.size()) return std::nullopt;

  const auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
  return ParsedTimestamp{time_point_cast<seconds>(local - offset), had_zone};
}

/// ISO-8601 UTC rendering, "YYYY-MM-DDTHH:MM:SSZ".
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

inline std::optional<std::chrono::sys_days> parse_date(std::string_view s) {
  using namespace std::chrono;
  int y, mo, d;
  if (s.size() != 10 || !detail::parse_digits(s, 0, 4, y) || s[4] != '-' ||
      !detail::parse_digits(s, 5, 2, mo) || s[7] != '-' ||
      !detail::parse_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

inline std::string format_date(std::chrono::sys_days d) {
  using namespace std::chrono;
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

// Calendar helpers, all in UTC.
inline std::int64_t day_index(Timestamp t) {
  return std::chrono::floor<std::chrono::days>(t).time_since_epoch().count();
}

inline int hour_of_day(Timestamp t) {
  using namespace std::chrono;
  return static_cast<int>(duration_cast<hours>(t - floor<days>(t)).count());
}

// Monday = 0 ... Sunday = 6.
inline int weekday_index(Timestamp t) {
  using namespace std::chrono;
  const weekday wd{floor<days>(t)};
  return static_cast<int>(wd.iso_encoding()) - 1;
}

// Months since year 0, usable as a distinct calendar-month key.
inline int month_key(Timestamp t) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(t)};
  return static_cast<int>(ymd.year()) * 12 +
         static_cast<int>(static_cast<unsigned>(ymd.month())) - 1;
}

}  // namespace cyberaggr
