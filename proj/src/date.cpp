// Copyright 2026 The clinvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clinvec/date.hpp"

#include <charconv>
#include <cstdio>

namespace clinvec {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;
using std::chrono::year_month_day;
using std::chrono::year_month_day_last;

Date Date::FromYmd(int y, unsigned m, unsigned d) {
  return Date(std::chrono::sys_days{year_month_day{year{y}, month{m}, day{d}}});
}

Date Date::FromDaysSinceEpoch(std::int64_t days) {
  return Date(std::chrono::sys_days{std::chrono::days{days}});
}

std::optional<Date> Date::Parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len, int& out) {
    for (std::size_t k = pos; k < pos + len; ++k) {
      if (text[k] < '0' || text[k] > '9') return false;
    }
    auto res = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return res.ec == std::errc{};
  };
  int y = 0, m = 0, d = 0;
  if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date(std::chrono::sys_days{ymd});
}

std::string Date::ToString() const {
  const auto ymd = Ymd();
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Date Date::AddMonths(int months) const {
  const auto ymd = Ymd();
  const auto shifted = year_month_day{ymd.year() / ymd.month() / 1} +
                       std::chrono::months{months};
  const auto last = year_month_day_last{shifted.year() / shifted.month() / std::chrono::last};
  const day d = ymd.day() > last.day() ? last.day() : ymd.day();
  return Date(std::chrono::sys_days{shifted.year() / shifted.month() / d});
}

}  // namespace clinvec
