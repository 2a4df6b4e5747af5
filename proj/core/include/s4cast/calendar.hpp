#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace s4cast {

using UtcTime = std::chrono::sys_seconds;
using UtcDate = std::chrono::year_month_day;

/// Parse "YYYY-MM-DD[ T]HH:MM[:SS][Z]" as a UTC instant. Returns nullopt on
/// malformed input or out-of-range calendar fields.
std::optional<UtcTime> parse_utc_time(std::string_view text);

/// Parse "YYYY-MM-DD" as a UTC calendar date.
std::optional<UtcDate> parse_utc_date(std::string_view text);

/// Calendar date from a (year, day-of-year) pair; doy in [1, 365/366].
std::optional<UtcDate> date_from_year_doy(int year, int doy);

UtcDate date_of(UtcTime t);

/// Day of year, 1-based (Jan 1 = 1; Dec 31 = 365 or 366).
int day_of_year(UtcDate d);

/// Integer hour of day in [0, 23].
int hour_of_day(UtcTime t);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_utc_time(UtcTime t);

/// "YYYY-MM-DD"
std::string format_utc_date(UtcDate d);

}  // namespace s4cast
