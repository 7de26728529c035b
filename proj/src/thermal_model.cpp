#include "rcplan/thermal_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rcplan/error.hpp"

namespace rcplan {

const std::array<std::string_view, RcParameters::kCount> RcParameters::kKeys{
    "r_i", "r_m", "r_s", "r_f", "r_v", "r_e", "c_i", "c_m", "g", "alpha", "a"};

std::array<double, RcParameters::kCount> RcParameters::to_array() const {
  return {interior_convective_resistance, wall_outer_resistance, wall_inner_resistance, infiltration_resistance,
          ventilation_resistance,         exterior_convective_resistance, air_capacitance, wall_capacitance,
          occupancy_gain,                 solar_gain,                     radiative_fraction};
}

RcParameters RcParameters::from_array(std::span<const double> v) {
  if (v.size() != kCount) throw ConfigError(fmt::format("expected {} parameters, got {}", kCount, v.size()));
  return RcParameters{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
}

void RcParameters::validate() const {
  const auto v = to_array();
  for (std::size_t i = 0; i < 8; ++i) {
    if (!(v[i] > 0) || !std::isfinite(v[i])) {
      throw ConfigError(fmt::format("parameter '{}' must be positive and finite, got {}", kKeys[i], v[i]));
    }
  }
  if (!(occupancy_gain >= 0) || !std::isfinite(occupancy_gain)) throw ConfigError("parameter 'g' must be >= 0");
  if (!(solar_gain >= 0) || !std::isfinite(solar_gain)) throw ConfigError("parameter 'alpha' must be >= 0");
  if (!(radiative_fraction >= 0 && radiative_fraction <= 1)) throw ConfigError("parameter 'a' must lie in [0, 1]");
}

ParameterBounds ParameterBounds::defaults() {
  ParameterBounds b;
  b.lower = RcParameters{1e-6, 1e-6, 1e-6, 1e-6, 1e-6, 1e-6, 1e4, 1e4, 0.0, 0.0, 0.0};
  b.upper = RcParameters{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1e10, 1e10, 1e5, 100.0, 1.0};
  return b;
}

void ParameterBounds::validate() const {
  lower.validate();
  upper.validate();
  const auto lo = lower.to_array();
  const auto hi = upper.to_array();
  for (std::size_t i = 0; i < RcParameters::kCount; ++i) {
    if (lo[i] > hi[i]) {
      throw ConfigError(fmt::format("bounds for '{}': lower {} exceeds upper {}", RcParameters::kKeys[i], lo[i], hi[i]));
    }
  }
}

bool ParameterBounds::contains(const RcParameters& p) const {
  const auto lo = lower.to_array();
  const auto hi = upper.to_array();
  const auto v = p.to_array();
  for (std::size_t i = 0; i < RcParameters::kCount; ++i) {
    if (v[i] < lo[i] || v[i] > hi[i]) return false;
  }
  return true;
}

std::string_view mode_name(Mode mode) { return mode == Mode::heating ? "heating" : "cooling"; }

Mode parse_mode(std::string_view text) {
  if (text == "heating") return Mode::heating;
  if (text == "cooling") return Mode::cooling;
  throw ConfigError(fmt::format("mode must be 'heating' or 'cooling', got '{}'", text));
}

void BuildingConfig::validate() const {
  if (!(p_min <= p_max)) throw ConfigError("p_min must not exceed p_max");
  if (mode == Mode::heating && p_min < 0) throw ConfigError("heating mode requires p_min >= 0");
  if (mode == Mode::cooling && p_max > 0) throw ConfigError("cooling mode requires p_max <= 0");
  if (!(day_start < day_end)) throw ConfigError("day_start must be before day_end");
  if (day_start < 0 || day_end > kMinutesPerDay) throw ConfigError("day set-point times must lie within the day");
  if (!(machine_efficiency >= 0 && machine_efficiency <= 1)) throw ConfigError("machine_efficiency must lie in [0, 1]");
  if (!std::isfinite(day_setpoint) || !std::isfinite(night_setpoint)) throw ConfigError("set-points must be finite");
}

SetpointSchedule SetpointSchedule::from_config(const BuildingConfig& config) {
  return SetpointSchedule{config.day_setpoint, config.night_setpoint, static_cast<double>(config.day_start),
                          static_cast<double>(config.day_end)};
}

double SetpointSchedule::at(LocalTime t) const {
  const double grid = static_cast<double>(kGridStep.count());
  const double start = std::floor(day_start / grid) * grid;
  const double end = std::floor(day_end / grid) * grid;
  const double m = minute_of_day(t);
  return (m >= start && m < end) ? day_setpoint : night_setpoint;
}

// --- Network equations -------------------------------------------------------

SurfaceTemperatures algebraic_nodes(const RcParameters& p, const ThermalState& s, const StepInputs& in) {
  const double gm = 1.0 / p.wall_outer_resistance;
  const double ge = 1.0 / p.exterior_convective_resistance;
  const double gi = 1.0 / p.interior_convective_resistance;
  const double gs = 1.0 / p.wall_inner_resistance;
  SurfaceTemperatures out;
  out.outer = (s.wall * gm + in.external_temp * ge + p.solar_gain * in.irradiance) / (gm + ge);
  out.inner = (s.indoor * gi + s.wall * gs + p.radiative_fraction * p.occupancy_gain * in.occupancy + in.internal_solar) /
              (gi + gs);
  return out;
}

double passive_air_gain(const RcParameters& p, const ThermalState& s, const StepInputs& in) {
  const SurfaceTemperatures surf = algebraic_nodes(p, s, in);
  const double outdoor_delta = in.external_temp - s.indoor;
  return (surf.inner - s.indoor) / p.interior_convective_resistance + outdoor_delta / p.infiltration_resistance +
         in.ventilation * outdoor_delta / p.ventilation_resistance +
         (1.0 - p.radiative_fraction) * p.occupancy_gain * in.occupancy;
}

PowerDemand thermostat_power(const RcParameters& p, const BuildingConfig& config, const ThermalState& s,
                             const StepInputs& in, double setpoint, double dt_seconds) {
  PowerDemand d;
  d.requested = p.air_capacitance * (setpoint - s.indoor) / dt_seconds - passive_air_gain(p, s, in);
  d.applied = std::max(std::min(d.requested, config.p_max), config.p_min);
  return d;
}

std::array<double, 2> state_derivative(const RcParameters& p, const ThermalState& s, const StepInputs& in,
                                       double power) {
  const SurfaceTemperatures surf = algebraic_nodes(p, s, in);
  const double outdoor_delta = in.external_temp - s.indoor;
  const double air_gain = (surf.inner - s.indoor) / p.interior_convective_resistance +
                          outdoor_delta / p.infiltration_resistance +
                          in.ventilation * outdoor_delta / p.ventilation_resistance +
                          (1.0 - p.radiative_fraction) * p.occupancy_gain * in.occupancy + power;
  const double wall_gain =
      (surf.outer - s.wall) / p.wall_outer_resistance + (surf.inner - s.wall) / p.wall_inner_resistance;
  return {air_gain / p.air_capacitance, wall_gain / p.wall_capacitance};
}

namespace {

ThermalState rk4(const RcParameters& p, const ThermalState& s0, const StepInputs& in, double power, double h) {
  const auto k1 = state_derivative(p, s0, in, power);
  const auto k2 = state_derivative(p, {s0.indoor + 0.5 * h * k1[0], s0.wall + 0.5 * h * k1[1]}, in, power);
  const auto k3 = state_derivative(p, {s0.indoor + 0.5 * h * k2[0], s0.wall + 0.5 * h * k2[1]}, in, power);
  const auto k4 = state_derivative(p, {s0.indoor + h * k3[0], s0.wall + h * k3[1]}, in, power);
  return {s0.indoor + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          s0.wall + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

[[noreturn]] void blowup(const RcParameters& p, std::size_t step_index) {
  const auto v = p.to_array();
  std::string params;
  for (std::size_t i = 0; i < v.size(); ++i) {
    params += fmt::format("{}{}={:.6g}", i ? " " : "", RcParameters::kKeys[i], v[i]);
  }
  throw NumericalBlowupError(fmt::format("thermal state became non-finite at step {} ({})", step_index, params),
                             step_index);
}

}  // namespace

StepResult step(const RcParameters& params, const BuildingConfig& config, const ThermalState& state,
                const StepInputs& inputs, double setpoint, double dt_seconds, int substeps, std::size_t step_index) {
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
  StepResult r;
  r.power = thermostat_power(params, config, state, inputs, setpoint, dt_seconds);
  const double h = dt_seconds / substeps;
  ThermalState s = state;
  for (int k = 0; k < substeps; ++k) s = rk4(params, s, inputs, r.power.applied, h);
  if (!std::isfinite(s.indoor) || !std::isfinite(s.wall)) blowup(params, step_index);
  r.next = s;
  return r;
}

// --- Simulation --------------------------------------------------------------

namespace {

struct InputViews {
  std::span<const double> external, irradiance, occupancy, ventilation;
};

InputViews views_of(const InputBundle& bundle) {
  if (!bundle.is_aligned()) throw ConfigError("simulation requires an aligned bundle");
  bundle.require({Role::external_temp, Role::solar_irradiance, Role::occupancy, Role::ventilation});
  return {bundle.external_temp->values(), bundle.solar_irradiance->values(), bundle.occupancy->values(),
          bundle.ventilation->values()};
}

}  // namespace

ThermalState simulate_into(const RcParameters& params, const BuildingConfig& config, const InputBundle& bundle,
                           const ThermalState& initial, const SetpointSchedule& schedule, const ModelOptions& options,
                           std::span<double> power_out, std::span<double> indoor_out) {
  const InputViews in = views_of(bundle);
  const std::size_t n = in.external.size();
  if (power_out.size() != n || indoor_out.size() != n) throw std::invalid_argument("output span length mismatch");
  const double dt = std::chrono::duration<double>(kGridStep).count();
  const LocalTime origin = bundle.origin();
  ThermalState s = initial;
  for (std::size_t k = 0; k < n; ++k) {
    const StepInputs x{in.external[k], in.irradiance[k], in.occupancy[k], in.ventilation[k], 0.0};
    const double sp = schedule.at(origin + static_cast<int>(k) * kGridStep);
    indoor_out[k] = s.indoor;
    const StepResult r = step(params, config, s, x, sp, dt, options.substeps, k);
    power_out[k] = r.power.applied;
    s = r.next;
  }
  return s;
}

SimulationResult simulate(const RcParameters& params, const BuildingConfig& config, const InputBundle& bundle,
                          const ThermalState& initial, const std::optional<SetpointSchedule>& schedule,
                          const ModelOptions& options) {
  if (!std::isfinite(initial.indoor) || !std::isfinite(initial.wall)) throw ConfigError("initial state must be finite");
  const InputViews in = views_of(bundle);
  const SetpointSchedule sched = schedule.value_or(SetpointSchedule::from_config(config));
  const std::size_t n = in.external.size();
  const double dt = std::chrono::duration<double>(kGridStep).count();
  const LocalTime origin = bundle.origin();

  std::vector<double> power(n), indoor(n), wall(n), outer(n), inner(n), setpoint(n);
  std::vector<ThermalState> states;
  states.reserve(n);
  ThermalState s = initial;
  for (std::size_t k = 0; k < n; ++k) {
    const StepInputs x{in.external[k], in.irradiance[k], in.occupancy[k], in.ventilation[k], 0.0};
    setpoint[k] = sched.at(origin + static_cast<int>(k) * kGridStep);
    const SurfaceTemperatures surf = algebraic_nodes(params, s, x);
    states.push_back(s);
    indoor[k] = s.indoor;
    wall[k] = s.wall;
    outer[k] = surf.outer;
    inner[k] = surf.inner;
    const StepResult r = step(params, config, s, x, setpoint[k], dt, options.substeps, k);
    power[k] = r.power.applied;
    s = r.next;
  }
  return SimulationResult{TimeSeries(origin, kGridStep, std::move(power), Unit::watt),
                          TimeSeries(origin, kGridStep, std::move(indoor), Unit::celsius),
                          TimeSeries(origin, kGridStep, std::move(wall), Unit::celsius),
                          TimeSeries(origin, kGridStep, std::move(outer), Unit::celsius),
                          TimeSeries(origin, kGridStep, std::move(inner), Unit::celsius),
                          TimeSeries(origin, kGridStep, std::move(setpoint), Unit::celsius),
                          std::move(states),
                          s};
}

ThermalState initial_state_from_history(const InputBundle& bundle) {
  bundle.require({Role::indoor_temp, Role::external_temp});
  const double ti = (*bundle.indoor_temp)[0];
  const double te = (*bundle.external_temp)[0];
  return ThermalState{ti, 0.5 * (ti + te)};
}

}  // namespace rcplan
