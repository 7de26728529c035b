#pragma once

#include <span>

namespace rcplan {

/// Mean absolute percentage error of forecast vs actual temperature, in %.
/// Throws DegenerateInputError when an actual value is within 1e-6 of zero.
double temperature_mape(std::span<const double> forecast, std::span<const double> actual);

/// Median of |forecast - actual|; even lengths average the two central values.
double power_median_abs_error(std::span<const double> forecast, std::span<const double> actual);

/// Median of |forecast - actual| for temperatures (same estimator as power).
double median_abs_error(std::span<const double> forecast, std::span<const double> actual);

double median(std::span<const double> values);

}  // namespace rcplan
