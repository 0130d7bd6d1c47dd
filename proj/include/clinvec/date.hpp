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

#ifndef CLINVEC_DATE_HPP_
#define CLINVEC_DATE_HPP_

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace clinvec {

// Calendar date stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  static Date FromYmd(int year, unsigned month, unsigned day);

  // Strict YYYY-MM-DD; nullopt for anything else, including Feb 30.
  static std::optional<Date> Parse(std::string_view text);

  std::string ToString() const;
  std::chrono::year_month_day Ymd() const { return std::chrono::year_month_day{days_}; }
  int Year() const { return static_cast<int>(Ymd().year()); }
  std::int64_t DaysSinceEpoch() const { return days_.time_since_epoch().count(); }
  static Date FromDaysSinceEpoch(std::int64_t days);

  // Calendar-month shift; a day past the end of the target month clamps to
  // the last day (Aug 31 minus six months is Feb 28 or 29).
  Date AddMonths(int months) const;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace clinvec

#endif  // CLINVEC_DATE_HPP_
