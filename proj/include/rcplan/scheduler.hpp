#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rcplan/mads.hpp"
#include "rcplan/thermal_model.hpp"
#include "rcplan/timeseries.hpp"

namespace rcplan {

/// Next-day control variables. Times are continuous minutes since midnight.
struct DecisionVector {
  double day_start = 0;                 ///< switch from night to day set-point
  std::optional<double> night_setpoint; ///< degC; absent when not optimized
  double night_start = 0;               ///< switch back to the night set-point

  bool operator==(const DecisionVector&) const = default;
};

/// Which variables the optimizer moves. The others keep the building's values.
struct DecisionSpace {
  bool day_start = true;
  bool night_setpoint = true;
  bool night_start = true;

  std::size_t dimension() const { return day_start + night_setpoint + night_start; }
};

struct DecisionBounds {
  double day_start_min = 4 * 60;
  double day_start_max = 8 * 60;
  double night_start_min = 16 * 60;
  double night_start_max = 22 * 60;
  double night_setpoint_min = 12;
  double night_setpoint_max = 20;
};

struct OptimizationSpec {
  Mode mode = Mode::heating;
  double comfort_temp = 23;
  int comfort_start = 8 * 60;  ///< minutes since midnight, inclusive
  int comfort_end = 20 * 60;   ///< exclusive
  DecisionSpace space;
  DecisionBounds bounds;
  std::size_t multistart_count = 20;
  MadsSettings mads;
  unsigned threads = 1;
  std::uint64_t seed = 0;

  /// 23 degC heating; 24 degC cooling with the night set-point fixed.
  static OptimizationSpec defaults(Mode mode);
  void validate() const;
};

/// Weather and schedules for the day to plan (aligned, 15-minute grid) and
/// the thermal state at its first instant.
struct ForecastDay {
  InputBundle inputs;
  ThermalState initial;
};

/// Set-point schedule realized by `theta`; variables absent from it keep
/// the values of `config`.
SetpointSchedule to_schedule(const BuildingConfig& config, const DecisionVector& theta);

/// Theta with its times floored to the 15-minute grid, as the model sees it.
DecisionVector snap_to_grid(const DecisionVector& theta);

struct ScheduleEvaluation {
  double objective = 0;   ///< sum of |power| over the day, W
  double constraint = 0;  ///< worst comfort shortfall in the window, degC
  bool failed = false;
  std::vector<double> power;   ///< W per step
  std::vector<double> indoor;  ///< degC at the start of each step
};

ScheduleEvaluation evaluate_schedule(const DecisionVector& theta, const RcParameters& params,
                                     const BuildingConfig& config, const ForecastDay& day,
                                     const OptimizationSpec& spec);

double objective_energy(const DecisionVector& theta, const RcParameters& params, const BuildingConfig& config,
                        const ForecastDay& day);

/// Max over comfort-window steps of T - T_comf (cooling) or T_comf - T (heating).
double constraint_comfort(const DecisionVector& theta, const RcParameters& params, const BuildingConfig& config,
                          const ForecastDay& day, const OptimizationSpec& spec);

/// Indices of the steps of `day` whose clock time falls in the comfort window.
std::vector<std::size_t> comfort_steps(const InputBundle& inputs, const OptimizationSpec& spec);

/// Watt-sum over 15-minute steps to kWh.
double watt_steps_to_kwh(double watt_sum);

/// Latin hypercube over the active variables; day >= night orderings are
/// repaired by swapping the two times.
std::vector<DecisionVector> lhs_sample(const OptimizationSpec& spec, const BuildingConfig& config,
                                       std::size_t count, std::uint64_t seed);

struct StartTrace {
  DecisionVector start;
  DecisionVector local;
  double objective = 0;
  double constraint = 0;
  bool feasible = false;
  std::size_t evaluations = 0;  ///< model simulations run from this start
  MadsStatus status = MadsStatus::mesh_converged;
};

struct ScheduleSolution {
  DecisionVector theta;
  double predicted_energy_kwh = 0;
  double constraint_value = 0;
  bool feasible = false;
  std::size_t evaluations_used = 0;
  std::uint64_t seed = 0;
  std::vector<StartTrace> starts;
};

/**
 * Multistart mesh search from a Latin hypercube of starts. Returns the
 * feasible local solution with the lowest energy (lowest start index on
 * ties), or, when no start reaches feasibility, the least-violating one.
 */
ScheduleSolution optimize_schedule(const RcParameters& params, const BuildingConfig& config, const ForecastDay& day,
                                   const OptimizationSpec& spec);

}  // namespace rcplan
