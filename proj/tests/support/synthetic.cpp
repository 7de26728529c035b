#include "synthetic.hpp"

#include <cmath>
#include <numbers>

#include "rcplan/random.hpp"

namespace synth {

using namespace rcplan;

RcParameters reference_parameters() {
  RcParameters p;
  p.interior_convective_resistance = 2e-5;
  p.wall_outer_resistance = 5e-5;
  p.wall_inner_resistance = 3e-5;
  p.infiltration_resistance = 1e-4;
  p.ventilation_resistance = 1.25e-4;
  p.exterior_convective_resistance = 1e-5;
  p.air_capacitance = 1e8;
  p.wall_capacitance = 5e9;
  p.occupancy_gain = 5e4;
  p.solar_gain = 20;
  p.radiative_fraction = 0.4;
  return p;
}

BuildingConfig reference_building() {
  BuildingConfig b;
  b.mode = Mode::heating;
  b.p_min = 0;
  b.p_max = 800e3;
  b.day_setpoint = 23.5;
  b.night_setpoint = 16;
  b.day_start = 6 * 60;
  b.day_end = 20 * 60;
  return b;
}

WeeklyTemplate reference_template() {
  WeeklyTemplate t;
  for (int d = 1; d <= 5; ++d) t.days[d] = DaySchedule{DailyInterval{7 * 60, 19 * 60}, DailyInterval{6 * 60, 20 * 60}};
  return t;
}

LocalTime default_origin() {
  using namespace std::chrono;
  return LocalTime{local_days{year{2024} / January / 8}};
}

InputBundle winter_weather(LocalTime origin, std::size_t days, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t hours = days * 24 + 1;  // one extra sample closes the last hour
  std::vector<double> temp(hours), solar(hours);
  double noise = 0;
  double cloud = 1;
  const double phase = rng.uniform(0, 2 * std::numbers::pi);
  for (std::size_t h = 0; h < hours; ++h) {
    const double hod = static_cast<double>(h % 24);
    if (h % 24 == 0) cloud = rng.uniform(0.2, 1.0);
    noise = 0.9 * noise + 0.4 * rng.normal();
    const double diurnal = 3.5 * std::sin(2 * std::numbers::pi * (hod - 9) / 24);
    const double synoptic = 3.0 * std::sin(2 * std::numbers::pi * static_cast<double>(h) / (24 * 5.3) + phase);
    temp[h] = 4.0 + diurnal + synoptic + noise;
    const double sun = (hod > 8 && hod < 16) ? std::sin(std::numbers::pi * (hod - 8) / 8) : 0.0;
    solar[h] = 350.0 * cloud * sun;
  }
  const TimeSeries t_hourly(origin, Minutes{60}, temp, Unit::celsius);
  const TimeSeries s_hourly(origin, Minutes{60}, solar, Unit::watt_per_m2);
  const std::size_t steps = days * 96;
  InputBundle b;
  b.external_temp = resample_linear(t_hourly, kGridStep).slice(0, steps);
  b.solar_irradiance = resample_linear(s_hourly, kGridStep).slice(0, steps);
  auto [occ, vent] = generate_schedules(reference_template(), origin, steps);
  b.occupancy = std::move(occ);
  b.ventilation = std::move(vent);
  return b;
}

InputBundle history(const RcParameters& params, const BuildingConfig& building, LocalTime origin, std::size_t days,
                    std::uint64_t seed, double power_noise, double initial_indoor) {
  InputBundle b = winter_weather(origin, days, seed);
  const ThermalState initial{initial_indoor, 0.5 * (initial_indoor + (*b.external_temp)[0])};
  const SimulationResult sim = simulate(params, building, b, initial);
  std::vector<double> power(sim.power.values().begin(), sim.power.values().end());
  if (power_noise > 0) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (double& p : power) p *= 1.0 + power_noise * rng.normal();
  }
  b.power = TimeSeries(origin, kGridStep, power, Unit::watt);
  b.indoor_temp = sim.indoor_temp;
  return b;
}

ForecastDay next_day(const RcParameters& params, const BuildingConfig& building, std::uint64_t seed,
                     std::size_t history_days) {
  const InputBundle all = winter_weather(default_origin(), history_days + 1, seed);
  const InputBundle past = all.slice(0, history_days * 96);
  const ThermalState initial{20.0, 0.5 * (20.0 + (*past.external_temp)[0])};
  const SimulationResult sim = simulate(params, building, past, initial);
  return ForecastDay{all.slice(history_days * 96, 96), sim.final_state};
}

}  // namespace synth
