#include "rcplan/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rcplan/error.hpp"
#include "rcplan/metrics.hpp"

namespace rcplan {

SavingsWindow SavingsWindow::defaults(Mode mode) {
  return mode == Mode::cooling ? SavingsWindow{19 * 60, 22 * 60} : SavingsWindow{4 * 60, 20 * 60};
}

void SavingsWindow::validate() const {
  if (start < 0 || end > kMinutesPerDay || start >= end) {
    throw ConfigError(fmt::format("savings window [{}, {}) must be a non-empty interval within the day",
                                  format_clock(start), format_clock(end)));
  }
}

namespace {

void check_same_grid(const TimeSeries& a, const TimeSeries& b) {
  if (a.origin() != b.origin() || a.step() != b.step() || a.size() != b.size()) {
    throw ConfigError("baseline and optimized power series must share origin, step and length");
  }
}

}  // namespace

Savings energy_savings(const TimeSeries& baseline, const TimeSeries& optimized, const SavingsWindow& window) {
  window.validate();
  check_same_grid(baseline, optimized);
  double base = 0, saved = 0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < baseline.size(); ++k) {
    if (!window.contains(minute_of_day(baseline.time_at(k)))) continue;
    base += std::abs(baseline[k]);
    saved += std::abs(baseline[k]) - std::abs(optimized[k]);
    ++used;
  }
  if (used == 0) throw DegenerateInputError("no step of the series falls inside the savings window");
  if (!(base > 0)) throw DegenerateInputError("baseline energy in the savings window is zero");
  const double hours = std::chrono::duration<double, std::ratio<3600>>(baseline.step()).count();
  return Savings{hours * saved / 1000.0, 100.0 * saved / base, hours * base / 1000.0};
}

std::vector<DailySavings> daily_savings(const TimeSeries& baseline, const TimeSeries& optimized,
                                        const SavingsWindow& window) {
  check_same_grid(baseline, optimized);
  std::vector<DailySavings> out;
  std::size_t first = 0;
  while (first < baseline.size()) {
    const LocalTime day = midnight_of(baseline.time_at(first));
    std::size_t last = first;
    while (last < baseline.size() && midnight_of(baseline.time_at(last)) == day) ++last;
    const auto n = last - first;
    out.push_back(DailySavings{std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(day)},
                               energy_savings(baseline.slice(first, n), optimized.slice(first, n), window)});
    first = last;
  }
  return out;
}

DailyError daily_error_report(std::span<const double> forecast_power, std::span<const double> forecast_temp,
                              std::span<const double> actual_power, std::span<const double> actual_temp) {
  const std::size_t n = actual_power.size();
  if (n == 0 || forecast_power.size() != n || forecast_temp.size() != n || actual_temp.size() != n) {
    throw ConfigError("daily error report needs four series of equal, non-zero length");
  }
  const auto [lo, hi] = std::minmax_element(actual_power.begin(), actual_power.end());
  const double range = *hi - *lo;
  if (!(range > 0)) throw DegenerateInputError("actual power range of the day is zero");
  const double f2 = power_median_abs_error(forecast_power, actual_power);
  return DailyError{f2 / 1000.0, 100.0 * f2 / range, temperature_mape(forecast_temp, actual_temp)};
}

WeatherErrorStats weather_error_stats(std::span<const double> forecast, std::span<const double> measured) {
  constexpr double kEpsilon = 1e-6;
  if (forecast.size() != measured.size() || measured.empty()) {
    throw ConfigError("forecast and measured weather must have equal, non-zero length");
  }
  WeatherErrorStats s;
  double rel_sum = 0, abs_sum = 0;
  std::size_t rel_count = 0;
  for (std::size_t k = 0; k < measured.size(); ++k) {
    const double err = std::abs(forecast[k] - measured[k]);
    abs_sum += err;
    s.max_abs = std::max(s.max_abs, err);
    if (std::abs(measured[k]) < kEpsilon) {
      ++s.excluded;
      continue;
    }
    rel_sum += err / std::abs(measured[k]);
    ++rel_count;
  }
  if (rel_count == 0) throw DegenerateInputError("every measured value is zero; relative error undefined");
  s.mean_relative_percent = 100.0 * rel_sum / static_cast<double>(rel_count);
  s.mean_abs = abs_sum / static_cast<double>(measured.size());
  return s;
}

ColumnSummary summarize(std::span<const double> values) {
  if (values.empty()) throw ConfigError("summary needs at least one value");
  ColumnSummary c;
  c.count = values.size();
  double sum = 0;
  for (double v : values) sum += v;
  c.mean = sum / static_cast<double>(c.count);
  double ss = 0;
  for (double v : values) ss += (v - c.mean) * (v - c.mean);
  c.sd = std::sqrt(ss / static_cast<double>(c.count));
  c.single_sample = c.count == 1;
  return c;
}

SavingsReport period_summary(std::vector<DailySavings> days) {
  std::vector<double> kwh, percent;
  for (const auto& d : days) {
    kwh.push_back(d.savings.kwh);
    percent.push_back(d.savings.percent);
  }
  SavingsReport r{std::move(days), summarize(kwh), summarize(percent)};
  return r;
}

ErrorReport error_summary(std::vector<std::chrono::year_month_day> dates, std::vector<DailyError> days) {
  if (dates.size() != days.size()) throw ConfigError("one date per daily error record is required");
  std::vector<double> kw, pct, temp;
  for (const auto& d : days) {
    kw.push_back(d.power_error_kw);
    pct.push_back(d.power_error_percent);
    temp.push_back(d.temp_error_percent);
  }
  return ErrorReport{std::move(dates), std::move(days), summarize(kw), summarize(pct), summarize(temp)};
}

}  // namespace rcplan
