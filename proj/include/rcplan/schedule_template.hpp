#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <utility>

#include <json.hpp>

#include "rcplan/timeseries.hpp"

namespace rcplan {

/// A daily on-interval [start, end) in minutes since midnight.
struct DailyInterval {
  int start = 0;
  int end = 0;
  bool contains(int minute) const { return minute >= start && minute < end; }
  bool operator==(const DailyInterval&) const = default;
};

struct DaySchedule {
  std::optional<DailyInterval> occupancy;
  std::optional<DailyInterval> ventilation;
  bool operator==(const DaySchedule&) const = default;
};

/// Occupancy and ventilation intervals per weekday, indexed by
/// `weekday::c_encoding()` (0 = Sunday). Days without an entry are off.
struct WeeklyTemplate {
  std::array<DaySchedule, 7> days{};
  bool operator==(const WeeklyTemplate&) const = default;
};

/**
 * Reads a template from JSON:
 *
 *     { "monday": { "occupancy": ["07:00", "19:00"], "ventilation": ["06:00", "20:00"] }, ... }
 *
 * Keys are lowercase English weekday names; `"weekdays"` and `"weekend"`
 * apply to Monday-Friday and Saturday-Sunday and may be refined by
 * individual days. `context` prefixes error messages.
 */
WeeklyTemplate parse_weekly_template(const nlohmann::json& j, const std::string& context = "schedule");
WeeklyTemplate load_weekly_template(const std::filesystem::path& path);

/// Occupancy and ventilation series of `count` samples from `origin`.
std::pair<ScheduleSeries, ScheduleSeries> generate_schedules(const WeeklyTemplate& tmpl, LocalTime origin,
                                                             std::size_t count, Minutes step = kGridStep);

}  // namespace rcplan
