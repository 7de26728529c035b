#pragma once

#include <cstdint>

#include "rcplan/schedule_template.hpp"
#include "rcplan/scheduler.hpp"
#include "rcplan/thermal_model.hpp"
#include "rcplan/timeseries.hpp"

// Synthetic large office building used by the tests: known parameters, a
// plausible winter climate and weekday occupancy.
namespace synth {

rcplan::RcParameters reference_parameters();
rcplan::BuildingConfig reference_building();
rcplan::WeeklyTemplate reference_template();

/// Monday 2024-01-08 00:00, far from any daylight-saving change.
rcplan::LocalTime default_origin();

/// Hourly winter weather interpolated to 15 minutes, with occupancy and
/// ventilation from the reference template. No power or indoor temperature.
rcplan::InputBundle winter_weather(rcplan::LocalTime origin, std::size_t days, std::uint64_t seed);

/// Weather plus "measured" power and indoor temperature simulated from
/// `params`. Power is perturbed by multiplicative Gaussian noise of relative
/// size `power_noise`.
rcplan::InputBundle history(const rcplan::RcParameters& params, const rcplan::BuildingConfig& building,
                            rcplan::LocalTime origin, std::size_t days, std::uint64_t seed,
                            double power_noise = 0.0, double initial_indoor = 20.0);

/// The day after a synthetic history, with the state reached at its end.
rcplan::ForecastDay next_day(const rcplan::RcParameters& params, const rcplan::BuildingConfig& building,
                             std::uint64_t seed, std::size_t history_days = 3);

}  // namespace synth
