#include "rcplan/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "rcplan/error.hpp"
#include "rcplan/lhs.hpp"
#include "rcplan/parallel.hpp"

namespace rcplan {

OptimizationSpec OptimizationSpec::defaults(Mode mode) {
  OptimizationSpec spec;
  spec.mode = mode;
  if (mode == Mode::cooling) {
    spec.comfort_temp = 24;
    spec.space.night_setpoint = false;
    spec.bounds.night_setpoint_min = 24;
    spec.bounds.night_setpoint_max = 30;
  }
  return spec;
}

void OptimizationSpec::validate() const {
  if (!std::isfinite(comfort_temp)) throw ConfigError("comfort temperature must be finite");
  if (comfort_start < 0 || comfort_end > kMinutesPerDay || comfort_start >= comfort_end) {
    throw ConfigError(fmt::format("comfort window [{}, {}) must be a non-empty interval within the day",
                                  format_clock(comfort_start), format_clock(comfort_end)));
  }
  if (space.dimension() == 0) throw ConfigError("at least one decision variable must be optimized");
  auto check = [](double lo, double hi, std::string_view name, double floor, double ceil) {
    if (!(lo <= hi) || lo < floor || hi > ceil) throw ConfigError(fmt::format("invalid bounds for {}: [{}, {}]", name, lo, hi));
  };
  check(bounds.day_start_min, bounds.day_start_max, "day_start", 0, kMinutesPerDay);
  check(bounds.night_start_min, bounds.night_start_max, "night_start", 0, kMinutesPerDay);
  check(bounds.night_setpoint_min, bounds.night_setpoint_max, "night_setpoint", -100, 100);
  if (!(bounds.day_start_min < bounds.night_start_max)) {
    throw ConfigError("day start bounds must allow a start before the night start");
  }
  if (multistart_count == 0) throw ConfigError("multistart count must be at least 1");
  mads.validate();
}

SetpointSchedule to_schedule(const BuildingConfig& config, const DecisionVector& theta) {
  return SetpointSchedule{config.day_setpoint, theta.night_setpoint.value_or(config.night_setpoint), theta.day_start,
                          theta.night_start};
}

DecisionVector snap_to_grid(const DecisionVector& theta) {
  const double grid = static_cast<double>(kGridStep.count());
  DecisionVector s = theta;
  s.day_start = std::floor(theta.day_start / grid) * grid;
  s.night_start = std::floor(theta.night_start / grid) * grid;
  return s;
}

std::vector<std::size_t> comfort_steps(const InputBundle& inputs, const OptimizationSpec& spec) {
  std::vector<std::size_t> steps;
  const std::size_t n = inputs.length();
  const LocalTime origin = inputs.origin();
  for (std::size_t k = 0; k < n; ++k) {
    const int minute = minute_of_day(origin + static_cast<int>(k) * kGridStep);
    if (minute >= spec.comfort_start && minute < spec.comfort_end) steps.push_back(k);
  }
  return steps;
}

double watt_steps_to_kwh(double watt_sum) { return 0.25 * watt_sum / 1000.0; }

ScheduleEvaluation evaluate_schedule(const DecisionVector& theta, const RcParameters& params,
                                     const BuildingConfig& config, const ForecastDay& day,
                                     const OptimizationSpec& spec) {
  if (!day.inputs.is_aligned()) throw ConfigError("forecast inputs must be aligned to the 15-minute grid");
  day.inputs.require({Role::external_temp, Role::solar_irradiance, Role::occupancy, Role::ventilation});
  const auto window = comfort_steps(day.inputs, spec);
  if (window.empty()) throw ConfigError("comfort window contains no step of the forecast day");

  const std::size_t n = day.inputs.length();
  ScheduleEvaluation e;
  e.power.resize(n);
  e.indoor.resize(n);
  try {
    simulate_into(params, config, day.inputs, day.initial, to_schedule(config, theta), ModelOptions{}, e.power,
                  e.indoor);
  } catch (const NumericalBlowupError&) {
    e.failed = true;
    e.objective = std::numeric_limits<double>::infinity();
    e.constraint = std::numeric_limits<double>::infinity();
    return e;
  }
  for (double p : e.power) e.objective += std::abs(p);
  e.constraint = -std::numeric_limits<double>::infinity();
  for (std::size_t k : window) {
    const double margin = spec.mode == Mode::cooling ? e.indoor[k] - spec.comfort_temp : spec.comfort_temp - e.indoor[k];
    e.constraint = std::max(e.constraint, margin);
  }
  return e;
}

double objective_energy(const DecisionVector& theta, const RcParameters& params, const BuildingConfig& config,
                        const ForecastDay& day) {
  OptimizationSpec spec = OptimizationSpec::defaults(config.mode);
  spec.comfort_start = 0;
  spec.comfort_end = kMinutesPerDay;
  return evaluate_schedule(theta, params, config, day, spec).objective;
}

double constraint_comfort(const DecisionVector& theta, const RcParameters& params, const BuildingConfig& config,
                          const ForecastDay& day, const OptimizationSpec& spec) {
  return evaluate_schedule(theta, params, config, day, spec).constraint;
}

namespace {

Box decision_box(const OptimizationSpec& spec) {
  Box box;
  auto add = [&](double lo, double hi) {
    box.lower.push_back(lo);
    box.upper.push_back(hi);
  };
  if (spec.space.day_start) add(spec.bounds.day_start_min, spec.bounds.day_start_max);
  if (spec.space.night_setpoint) add(spec.bounds.night_setpoint_min, spec.bounds.night_setpoint_max);
  if (spec.space.night_start) add(spec.bounds.night_start_min, spec.bounds.night_start_max);
  return box;
}

std::vector<double> encode(const DecisionVector& theta, const OptimizationSpec& spec) {
  std::vector<double> x;
  if (spec.space.day_start) x.push_back(theta.day_start);
  if (spec.space.night_setpoint) x.push_back(theta.night_setpoint.value());
  if (spec.space.night_start) x.push_back(theta.night_start);
  return x;
}

DecisionVector decode(std::span<const double> x, const OptimizationSpec& spec, const BuildingConfig& config) {
  DecisionVector theta{static_cast<double>(config.day_start), std::nullopt, static_cast<double>(config.day_end)};
  std::size_t i = 0;
  if (spec.space.day_start) theta.day_start = x[i++];
  if (spec.space.night_setpoint) theta.night_setpoint = x[i++];
  if (spec.space.night_start) theta.night_start = x[i++];
  return theta;
}

}  // namespace

std::vector<DecisionVector> lhs_sample(const OptimizationSpec& spec, const BuildingConfig& config, std::size_t count,
                                       std::uint64_t seed) {
  const auto points = latin_hypercube(decision_box(spec), count, seed);
  std::vector<DecisionVector> out;
  out.reserve(points.size());
  const auto& b = spec.bounds;
  for (const auto& p : points) {
    DecisionVector theta = decode(p, spec, config);
    if (spec.space.day_start && spec.space.night_start && theta.day_start >= theta.night_start) {
      std::swap(theta.day_start, theta.night_start);
      theta.day_start = std::clamp(theta.day_start, b.day_start_min, b.day_start_max);
      theta.night_start = std::clamp(theta.night_start, b.night_start_min, b.night_start_max);
    }
    out.push_back(theta);
  }
  return out;
}

ScheduleSolution optimize_schedule(const RcParameters& params, const BuildingConfig& config, const ForecastDay& day,
                                   const OptimizationSpec& spec) {
  spec.validate();
  config.validate();
  const Box box = decision_box(spec);
  const auto starts = lhs_sample(spec, config, spec.multistart_count, spec.seed);
  std::vector<StartTrace> traces(starts.size());

  parallel_for(starts.size(), spec.threads, [&](std::size_t s) {
    // Times are floored inside the model, so nearby mesh points often map to
    // the same simulation.
    std::map<std::vector<double>, BlackboxValue> simulated;
    auto blackbox = [&](std::span<const double> x) {
      const DecisionVector theta = snap_to_grid(decode(x, spec, config));
      std::vector<double> key{theta.day_start, theta.night_setpoint.value_or(0.0), theta.night_start};
      if (auto it = simulated.find(key); it != simulated.end()) return it->second;
      const ScheduleEvaluation e = evaluate_schedule(theta, params, config, day, spec);
      const BlackboxValue v{e.objective, e.constraint, e.failed};
      simulated.emplace(std::move(key), v);
      return v;
    };
    const MadsResult r = mads_solve(blackbox, encode(starts[s], spec), box, spec.mads);
    StartTrace& t = traces[s];
    t.start = starts[s];
    t.local = snap_to_grid(decode(r.x, spec, config));
    t.objective = r.value.objective;
    t.constraint = r.value.constraint;
    t.feasible = r.feasible;
    t.evaluations = simulated.size();
    t.status = r.status;
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < traces.size(); ++s) {
    const StartTrace& a = traces[s];
    const StartTrace& b = traces[best];
    const bool better = a.feasible ? (!b.feasible || a.objective < b.objective)
                                   : (!b.feasible && a.constraint < b.constraint);
    if (better) best = s;
  }

  ScheduleSolution sol;
  sol.theta = traces[best].local;
  sol.predicted_energy_kwh = watt_steps_to_kwh(traces[best].objective);
  sol.constraint_value = traces[best].constraint;
  sol.feasible = traces[best].feasible;
  sol.seed = spec.seed;
  for (const auto& t : traces) sol.evaluations_used += t.evaluations;
  sol.starts = std::move(traces);
  return sol;
}

}  // namespace rcplan
