// Copyright 2026 The worrywords-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// RFC 3339 timestamps and duration strings, at one-second resolution.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "worrywords/errors.hpp"

namespace worrywords::timeutil {

namespace detail {

inline int digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) throw ParseError("truncated timestamp '" + std::string(s) + "'");
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw ParseError("bad digit in timestamp '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace detail

/// Seconds since the Unix epoch. Fractional seconds are truncated.
inline std::int64_t parse_rfc3339(std::string_view s) {
  using namespace std::chrono;
  const auto bad = [&] { return ParseError("invalid RFC 3339 timestamp '" + std::string(s) + "'"); };
  if (s.size() < 20 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    throw bad();
  const year_month_day ymd{year{detail::digits(s, 0, 4)},
                           month{static_cast<unsigned>(detail::digits(s, 5, 2))},
                           day{static_cast<unsigned>(detail::digits(s, 8, 2))}};
  if (!ymd.ok()) throw bad();
  const int hh = detail::digits(s, 11, 2), mm = detail::digits(s, 14, 2),
            ss = detail::digits(s, 17, 2);
  if (hh > 23 || mm > 59 || ss > 60) throw bad();
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw bad();
  }
  if (pos >= s.size()) throw bad();
  std::int64_t offset = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '-' ? -1 : 1;
    if (pos + 6 != s.size() || s[pos + 3] != ':') throw bad();
    offset = sign * (detail::digits(s, pos + 1, 2) * 3600 + detail::digits(s, pos + 4, 2) * 60);
    pos += 6;
  } else {
    throw bad();
  }
  if (pos != s.size()) throw bad();
  const auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

/// UTC, e.g. "2024-03-01T12:00:00Z".
inline std::string format_rfc3339(std::int64_t epoch_seconds) {
  using namespace std::chrono;
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                static_cast<int>(rem % 60));
  return buf;
}

/// "90", "90s", "15m", "6h", "1d" or "2w" to seconds.
inline std::int64_t parse_duration(std::string_view s) {
  if (s.empty()) throw ParseError("empty duration");
  std::int64_t unit = 1;
  switch (s.back()) {
    case 's': unit = 1; s.remove_suffix(1); break;
    case 'm': unit = 60; s.remove_suffix(1); break;
    case 'h': unit = 3600; s.remove_suffix(1); break;
    case 'd': unit = 86400; s.remove_suffix(1); break;
    case 'w': unit = 7 * 86400; s.remove_suffix(1); break;
    default: break;
  }
  if (s.empty()) throw ParseError("duration without a number");
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("invalid duration '" + std::string(s) + "'");
    v = v * 10 + (c - '0');
  }
  if (v <= 0) throw ParseError("duration must be positive");
  return v * unit;
}

}  // namespace worrywords::timeutil
