#include "rcplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "rcplan/error.hpp"

namespace rcplan {
namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument(fmt::format("length mismatch: {} vs {}", a.size(), b.size()));
  if (a.empty()) throw InsufficientDataError("error metrics need at least one sample");
}

}  // namespace

double median(std::span<const double> values) {
  if (values.empty()) throw InsufficientDataError("median of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double temperature_mape(std::span<const double> forecast, std::span<const double> actual) {
  check_lengths(forecast, actual);
  double sum = 0;
  for (std::size_t t = 0; t < actual.size(); ++t) {
    if (std::abs(actual[t]) < 1e-6) {
      throw DegenerateInputError(fmt::format("actual temperature at index {} is zero; percentage error undefined", t));
    }
    sum += std::abs((forecast[t] - actual[t]) / actual[t]);
  }
  return 100.0 * sum / static_cast<double>(actual.size());
}

double median_abs_error(std::span<const double> forecast, std::span<const double> actual) {
  check_lengths(forecast, actual);
  std::vector<double> dev(actual.size());
  for (std::size_t t = 0; t < actual.size(); ++t) dev[t] = std::abs(forecast[t] - actual[t]);
  return median(dev);
}

double power_median_abs_error(std::span<const double> forecast, std::span<const double> actual) {
  return median_abs_error(forecast, actual);
}

}  // namespace rcplan
