#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace rcplan {

using Minutes = std::chrono::minutes;

/// Naive local wall-clock time, minute resolution. No time zone is attached.
using LocalTime = std::chrono::local_time<Minutes>;

/// The grid every model pipeline runs on.
inline constexpr Minutes kGridStep{15};
inline constexpr int kMinutesPerDay = 24 * 60;

/// Half-open interval [start, end).
struct TimeWindow {
  LocalTime start;
  LocalTime end;

  Minutes duration() const { return end - start; }
  bool operator==(const TimeWindow&) const = default;
};

/// Parses `YYYY-MM-DDTHH:MM`. Returns nullopt on any syntax or range error.
std::optional<LocalTime> parse_timestamp(std::string_view text);
std::string format_timestamp(LocalTime t);

/// Parses `HH:MM` into minutes since midnight; `24:00` is accepted as 1440.
/// Throws ConfigError on malformed input.
int parse_clock(std::string_view text);
/// Formats minutes since midnight as `HH:MM` (fractional minutes truncated).
std::string format_clock(double minutes);

int minute_of_day(LocalTime t);
std::chrono::weekday weekday_of(LocalTime t);
LocalTime midnight_of(LocalTime t);

}  // namespace rcplan
