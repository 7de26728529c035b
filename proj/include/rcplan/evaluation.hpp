#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <vector>

#include "rcplan/thermal_model.hpp"
#include "rcplan/timeseries.hpp"

namespace rcplan {

/// Clock-time window [start, end) in minutes since midnight.
struct SavingsWindow {
  int start = 4 * 60;
  int end = 20 * 60;

  /// 04:00-20:00 for heating, 19:00-22:00 for cooling.
  static SavingsWindow defaults(Mode mode);
  void validate() const;
  bool contains(int minute_of_day) const { return minute_of_day >= start && minute_of_day < end; }
};

struct Savings {
  double kwh = 0;
  double percent = 0;
  double baseline_kwh = 0;
};

/**
 * Savings of `optimized` against the non-optimized forecast `baseline`,
 * summed over every step whose clock time lies in `window`. Power magnitudes
 * are used so heating and cooling read the same way. Throws
 * DegenerateInputError when the baseline energy in the window is zero.
 */
Savings energy_savings(const TimeSeries& baseline, const TimeSeries& optimized, const SavingsWindow& window);

struct DailySavings {
  std::chrono::year_month_day date;
  Savings savings;
};

/// energy_savings evaluated separately on each calendar day of the series.
std::vector<DailySavings> daily_savings(const TimeSeries& baseline, const TimeSeries& optimized,
                                        const SavingsWindow& window);

struct DailyError {
  double power_error_kw = 0;       ///< median |forecast - actual| power
  double power_error_percent = 0;  ///< the above over the day's actual power range
  double temp_error_percent = 0;   ///< indoor temperature MAPE
};

/// Error statistics of one day (96 steps) of forecast against measurements.
DailyError daily_error_report(std::span<const double> forecast_power, std::span<const double> forecast_temp,
                              std::span<const double> actual_power, std::span<const double> actual_temp);

struct WeatherErrorStats {
  double mean_relative_percent = 0;
  double mean_abs = 0;
  double max_abs = 0;
  std::size_t excluded = 0;  ///< instants left out of the relative mean
};

/// Relative errors skip instants where |measured| < 1e-6 (night irradiance).
WeatherErrorStats weather_error_stats(std::span<const double> forecast, std::span<const double> measured);

struct ColumnSummary {
  double mean = 0;
  double sd = 0;  ///< population standard deviation
  std::size_t count = 0;
  bool single_sample = false;
};

ColumnSummary summarize(std::span<const double> values);

struct SavingsReport {
  std::vector<DailySavings> days;
  ColumnSummary kwh;
  ColumnSummary percent;
};

SavingsReport period_summary(std::vector<DailySavings> days);

struct ErrorReport {
  std::vector<std::chrono::year_month_day> dates;
  std::vector<DailyError> days;
  ColumnSummary power_kw;
  ColumnSummary power_percent;
  ColumnSummary temp_percent;
};

ErrorReport error_summary(std::vector<std::chrono::year_month_day> dates, std::vector<DailyError> days);

}  // namespace rcplan
