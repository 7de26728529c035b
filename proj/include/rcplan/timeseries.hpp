#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcplan/time.hpp"

namespace rcplan {

enum class Unit { watt, kilowatt, celsius, watt_per_m2, dimensionless };

std::string_view unit_name(Unit unit);

/**
 * Uniformly sampled scalar series anchored at a local timestamp.
 *
 * Construction validates the invariants: positive step, at least one sample,
 * and only finite values. Instances are immutable.
 */
class TimeSeries {
 public:
  TimeSeries(LocalTime origin, Minutes step, std::vector<double> values, Unit unit);

  LocalTime origin() const { return origin_; }
  Minutes step() const { return step_; }
  Unit unit() const { return unit_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  LocalTime time_at(std::size_t i) const { return origin_ + static_cast<int>(i) * step_; }
  LocalTime last_time() const { return time_at(values_.size() - 1); }

  /// Sub-range [first, first + count).
  TimeSeries slice(std::size_t first, std::size_t count) const;

  bool operator==(const TimeSeries&) const = default;

 private:
  LocalTime origin_;
  Minutes step_;
  std::vector<double> values_;
  Unit unit_;
};

/// On/off indicator series (occupancy, ventilation). Every value is 0 or 1.
class ScheduleSeries {
 public:
  ScheduleSeries(LocalTime origin, Minutes step, std::vector<double> values);

  LocalTime origin() const { return origin_; }
  Minutes step() const { return step_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  LocalTime time_at(std::size_t i) const { return origin_ + static_cast<int>(i) * step_; }
  LocalTime last_time() const { return time_at(values_.size() - 1); }

  ScheduleSeries slice(std::size_t first, std::size_t count) const;

  bool operator==(const ScheduleSeries&) const = default;

 private:
  LocalTime origin_;
  Minutes step_;
  std::vector<double> values_;
};

enum class Role { power, indoor_temp, external_temp, solar_irradiance, occupancy, ventilation };

std::string_view role_name(Role role);

/**
 * The dynamic inputs of the model. Before `align` every member may have its
 * own sampling and some may be absent (a weather-only file, for instance);
 * after `align` all present members share origin, step and length.
 *
 * Power is stored in W.
 */
struct InputBundle {
  std::optional<TimeSeries> power;
  std::optional<TimeSeries> indoor_temp;
  std::optional<TimeSeries> external_temp;
  std::optional<TimeSeries> solar_irradiance;
  std::optional<ScheduleSeries> occupancy;
  std::optional<ScheduleSeries> ventilation;

  bool has(Role role) const;
  /// Length of the aligned bundle; throws if it is empty or not aligned.
  std::size_t length() const;
  LocalTime origin() const;
  bool is_aligned() const;
  /// Throws ConfigError naming the first role that is absent.
  void require(std::initializer_list<Role> roles) const;

  InputBundle slice(std::size_t first, std::size_t count) const;

  bool operator==(const InputBundle&) const = default;
};

/// Combines the members of two bundles; a role present in both is an error.
InputBundle merge(InputBundle a, const InputBundle& b);

/// Maps roles to CSV header names.
struct ColumnSpec {
  std::map<Role, std::string> columns;
  /// Unit of the power column in the file (kW or W); stored as W.
  Unit power_unit = Unit::kilowatt;
  /// Longest run of missing rows (in minutes of missing samples) that is
  /// filled; longer gaps reject the file.
  Minutes max_gap{60};
};

/**
 * Reads a comma-separated file whose first column is a `YYYY-MM-DDTHH:MM`
 * timestamp. Only the roles present in `spec` are read; the result keeps the
 * file's native sampling.
 *
 * Missing rows (timestamp gaps that are a multiple of the native step) are
 * filled by linear interpolation for measured series and by previous-value
 * hold for schedule columns, up to `spec.max_gap`. An empty or non-numeric
 * cell in a present row is an error.
 */
InputBundle ingest_csv(const std::filesystem::path& path, const ColumnSpec& spec);
InputBundle parse_csv(std::istream& in, const ColumnSpec& spec, const std::string& source_name);

/// Linear upsampling; original instants keep their exact values.
TimeSeries resample_linear(const TimeSeries& series, Minutes target_step);
/// Previous-value hold upsampling for schedules.
ScheduleSeries resample_hold(const ScheduleSeries& series, Minutes target_step);

enum class DstRule { none, eu };

struct AlignOptions {
  /// Windows containing a transition under this rule are rejected.
  DstRule dst_rule = DstRule::eu;
};

/// Daylight-saving transitions (local wall-clock instant) inside [start, end).
std::vector<LocalTime> dst_transitions(DstRule rule, const TimeWindow& window);

/**
 * Resamples every present member onto the 15-minute grid and trims it to
 * `window`. Measured series are interpolated linearly, schedules are held.
 */
InputBundle align(const InputBundle& bundle, const TimeWindow& window, const AlignOptions& options = {});

/// Window spanned by the aligned bundle: [origin, origin + length * 15 min).
TimeWindow window_of(const InputBundle& aligned);

}  // namespace rcplan
