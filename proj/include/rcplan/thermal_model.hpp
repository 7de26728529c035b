#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rcplan/timeseries.hpp"

namespace rcplan {

/**
 * Calibratable parameters of the two-capacitance, six-resistance network.
 *
 * Node layout: indoor air (capacitive) -- interior convective resistance --
 * inner wall surface -- inner wall conduction -- wall core (capacitive) --
 * outer wall conduction -- outer wall surface -- exterior convective
 * resistance -- outdoor air. Infiltration/glazing and mechanical ventilation
 * connect indoor air straight to outdoor air.
 */
struct RcParameters {
  double interior_convective_resistance = 0;  ///< K/W, air <-> inner surface
  double wall_outer_resistance = 0;           ///< K/W, wall core <-> outer surface
  double wall_inner_resistance = 0;           ///< K/W, wall core <-> inner surface
  double infiltration_resistance = 0;         ///< K/W, air <-> outdoor (glazing, leaks)
  double ventilation_resistance = 0;          ///< K/W, air <-> outdoor while ventilation runs
  double exterior_convective_resistance = 0;  ///< K/W, outer surface <-> outdoor
  double air_capacitance = 0;                 ///< J/K
  double wall_capacitance = 0;                ///< J/K
  double occupancy_gain = 0;                  ///< W at full occupancy
  double solar_gain = 0;                      ///< multiplies irradiance in W/m2 (fitted gain)
  double radiative_fraction = 0;              ///< share of occupancy gain released on the inner wall

  static constexpr std::size_t kCount = 11;
  /// Short keys used in files: r_i r_m r_s r_f r_v r_e c_i c_m g alpha a.
  static const std::array<std::string_view, kCount> kKeys;

  std::array<double, kCount> to_array() const;
  static RcParameters from_array(std::span<const double> values);

  /// Throws ConfigError unless resistances and capacitances are positive,
  /// gains non-negative and the radiative fraction in [0, 1].
  void validate() const;

  bool operator==(const RcParameters&) const = default;
};

struct ParameterBounds {
  RcParameters lower;
  RcParameters upper;

  /// Generous envelopes for a large tertiary building.
  static ParameterBounds defaults();
  void validate() const;
  bool contains(const RcParameters& p) const;
};

enum class Mode { heating, cooling };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view text);

/// Static inputs of a building. Powers are in W (signed, cooling negative).
struct BuildingConfig {
  Mode mode = Mode::heating;
  double p_min = 0;
  double p_max = 1.0e6;
  double day_setpoint = 23.5;
  double night_setpoint = 16.0;
  int day_start = 6 * 60;  ///< minutes since midnight
  int day_end = 20 * 60;
  // Reporting metadata only.
  double volume = 0;              ///< m3
  double machine_efficiency = 1;  ///< [0, 1]
  double lhv = 10.0;              ///< kWh per m3 of fuel

  void validate() const;
};

/**
 * Day/night set-point schedule. Switching times are continuous minutes since
 * midnight; they are floored to the 15-minute grid when the model runs.
 */
struct SetpointSchedule {
  double day_setpoint = 0;
  double night_setpoint = 0;
  double day_start = 0;
  double day_end = 0;

  static SetpointSchedule from_config(const BuildingConfig& config);
  /// Set-point in force at `t`: day value on [day_start, day_end), night otherwise.
  double at(LocalTime t) const;
};

struct ThermalState {
  double indoor = 0;  ///< indoor air temperature, degC
  double wall = 0;    ///< wall core temperature, degC
  bool operator==(const ThermalState&) const = default;
};

struct SurfaceTemperatures {
  double outer = 0;  ///< outer wall surface, degC
  double inner = 0;  ///< inner wall surface, degC
};

/// Inputs held constant over one grid step.
struct StepInputs {
  double external_temp = 0;  ///< degC
  double irradiance = 0;     ///< W/m2
  double occupancy = 0;      ///< [0, 1]
  double ventilation = 0;    ///< 0 or 1
  double internal_solar = 0; ///< W on the inner wall surface; zero unless a model supplies it
};

struct PowerDemand {
  double requested = 0;  ///< W needed to reach the set-point within one step
  double applied = 0;    ///< requested clamped to [p_min, p_max]
};

struct StepResult {
  ThermalState next;
  PowerDemand power;
};

struct ModelOptions {
  /// RK4 sub-steps per grid step; power and inputs stay constant across them.
  int substeps = 1;
};

/// Solves the two algebraic surface nodes for a given state.
SurfaceTemperatures algebraic_nodes(const RcParameters& params, const ThermalState& state, const StepInputs& inputs);

/// Net heat flow into the indoor air from everything except the HVAC plant, W.
double passive_air_gain(const RcParameters& params, const ThermalState& state, const StepInputs& inputs);

/// Power that would bring the indoor air to `setpoint` over `dt_seconds`,
/// and its clamp to the plant limits.
PowerDemand thermostat_power(const RcParameters& params, const BuildingConfig& config, const ThermalState& state,
                             const StepInputs& inputs, double setpoint, double dt_seconds);

/// Time derivatives (dT_indoor/dt, dT_wall/dt) in K/s for a fixed plant power.
std::array<double, 2> state_derivative(const RcParameters& params, const ThermalState& state, const StepInputs& inputs,
                                       double power);

/**
 * Advances one grid step: computes the clamped thermostat power at the start
 * of the step, holds it, and integrates with classical RK4 using `substeps`
 * equal sub-steps. Throws NumericalBlowupError if the state becomes
 * non-finite.
 */
StepResult step(const RcParameters& params, const BuildingConfig& config, const ThermalState& state,
                const StepInputs& inputs, double setpoint, double dt_seconds, int substeps = 1,
                std::size_t step_index = 0);

struct SimulationResult {
  TimeSeries power;        ///< W, applied (clamped) power over each step
  TimeSeries indoor_temp;  ///< degC at the start of each step
  TimeSeries wall_temp;
  TimeSeries outer_surface_temp;
  TimeSeries inner_surface_temp;
  TimeSeries setpoint;
  std::vector<ThermalState> states;  ///< state at the start of each step
  ThermalState final_state;          ///< state after the last step
};

/**
 * Runs the model over an aligned bundle (external temperature, irradiance,
 * occupancy and ventilation are required). The set-point schedule defaults
 * to the building's day/night configuration.
 */
SimulationResult simulate(const RcParameters& params, const BuildingConfig& config, const InputBundle& bundle,
                          const ThermalState& initial, const std::optional<SetpointSchedule>& schedule = std::nullopt,
                          const ModelOptions& options = {});

/// Indoor temperature from the first measurement; wall core halfway between
/// indoor and outdoor temperature at that instant.
ThermalState initial_state_from_history(const InputBundle& bundle);

/**
 * Allocation-light inner loop used by calibration and scheduling: writes the
 * applied power and indoor temperature of each step into the output spans
 * (both of bundle length). Returns the final state.
 */
ThermalState simulate_into(const RcParameters& params, const BuildingConfig& config, const InputBundle& bundle,
                           const ThermalState& initial, const SetpointSchedule& schedule, const ModelOptions& options,
                           std::span<double> power_out, std::span<double> indoor_out);

}  // namespace rcplan
