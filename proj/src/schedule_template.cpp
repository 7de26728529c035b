#include "rcplan/schedule_template.hpp"

#include <fstream>

#include <fmt/format.h>

#include "rcplan/error.hpp"

namespace rcplan {
namespace {

constexpr std::array<const char*, 7> kDayNames{"sunday", "monday", "tuesday", "wednesday",
                                               "thursday", "friday", "saturday"};

DailyInterval parse_interval(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    throw ConfigError(fmt::format("{}: expected [\"HH:MM\", \"HH:MM\"]", where));
  }
  DailyInterval iv{parse_clock(j[0].get<std::string>()), parse_clock(j[1].get<std::string>())};
  if (iv.start >= iv.end) throw ConfigError(fmt::format("{}: start must be before end", where));
  return iv;
}

void apply_day(DaySchedule& day, const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  for (const auto& [key, value] : j.items()) {
    if (key == "occupancy") {
      day.occupancy = value.is_null() ? std::nullopt : std::optional(parse_interval(value, where + ".occupancy"));
    } else if (key == "ventilation") {
      day.ventilation = value.is_null() ? std::nullopt : std::optional(parse_interval(value, where + ".ventilation"));
    } else {
      throw ConfigError(fmt::format("unknown key '{}.{}'", where, key));
    }
  }
}

}  // namespace

WeeklyTemplate parse_weekly_template(const nlohmann::json& j, const std::string& context) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", context));
  WeeklyTemplate t;
  // Group keys first so individual days refine them regardless of key order.
  if (j.contains("weekdays")) {
    for (int d = 1; d <= 5; ++d) apply_day(t.days[d], j.at("weekdays"), context + ".weekdays");
  }
  if (j.contains("weekend")) {
    for (int d : {0, 6}) apply_day(t.days[d], j.at("weekend"), context + ".weekend");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "weekdays" || key == "weekend") continue;
    bool matched = false;
    for (std::size_t d = 0; d < kDayNames.size(); ++d) {
      if (key == kDayNames[d]) {
        apply_day(t.days[d], value, context + "." + key);
        matched = true;
      }
    }
    if (!matched) throw ConfigError(fmt::format("unknown key '{}.{}'", context, key));
  }
  return t;
}

WeeklyTemplate load_weekly_template(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open schedule template '{}'", path.string()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_weekly_template(j, path.filename().string());
}

std::pair<ScheduleSeries, ScheduleSeries> generate_schedules(const WeeklyTemplate& tmpl, LocalTime origin,
                                                             std::size_t count, Minutes step) {
  std::vector<double> occ(count), ven(count);
  for (std::size_t k = 0; k < count; ++k) {
    const LocalTime t = origin + static_cast<int>(k) * step;
    const DaySchedule& day = tmpl.days[weekday_of(t).c_encoding()];
    const int m = minute_of_day(t);
    occ[k] = day.occupancy && day.occupancy->contains(m) ? 1.0 : 0.0;
    ven[k] = day.ventilation && day.ventilation->contains(m) ? 1.0 : 0.0;
  }
  return {ScheduleSeries(origin, step, std::move(occ)), ScheduleSeries(origin, step, std::move(ven))};
}

}  // namespace rcplan
