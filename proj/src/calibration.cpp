#include "rcplan/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rcplan/error.hpp"
#include "rcplan/metrics.hpp"
#include "rcplan/topsis.hpp"

namespace rcplan {

bool ParetoFront::is_mutually_nondominated() const {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto a = candidates[i].scores.as_vector();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (i != j && dominates(a, candidates[j].scores.as_vector())) return false;
    }
  }
  return true;
}

AccuracyReport make_accuracy_report(double median_abs_temp_error, double relative_temp_error, double power_median_abs,
                                    double power_range, const AccuracyThresholds& thresholds) {
  if (!(power_range > 0)) throw DegenerateInputError("actual power range is zero; relative power error undefined");
  AccuracyReport r;
  r.median_abs_temp_error = median_abs_temp_error;
  r.relative_temp_error = relative_temp_error;
  r.power_median_abs = power_median_abs;
  r.power_range = power_range;
  r.relative_power_error = 100.0 * power_median_abs / power_range;
  r.thresholds = thresholds;
  r.pass = r.median_abs_temp_error < thresholds.abs_temp_c && r.relative_temp_error < thresholds.rel_temp_percent &&
           r.relative_power_error < thresholds.rel_power_percent;
  return r;
}

// --- CalibrationProblem ----------------------------------------------------------

CalibrationProblem::CalibrationProblem(BuildingConfig config, InputBundle window, ModelOptions options)
    : config_(std::move(config)), window_(std::move(window)), options_(options) {
  config_.validate();
  if (!window_.is_aligned()) throw ConfigError("calibration window must be aligned");
  window_.require({Role::power, Role::indoor_temp, Role::external_temp, Role::solar_irradiance, Role::occupancy,
                   Role::ventilation});
  const auto indoor = window_.indoor_temp->values();
  for (std::size_t t = 0; t < indoor.size(); ++t) {
    if (std::abs(indoor[t]) < 1e-6) {
      throw DegenerateInputError(
          fmt::format("measured indoor temperature is zero at {}; percentage error undefined",
                      format_timestamp(window_.indoor_temp->time_at(t))));
    }
  }
  initial_ = initial_state_from_history(window_);
  schedule_ = SetpointSchedule::from_config(config_);
}

ObjectiveScores CalibrationProblem::evaluate(const RcParameters& params) const {
  const std::size_t n = window_.length();
  std::vector<double> power(n), indoor(n);
  try {
    simulate_into(params, config_, window_, initial_, schedule_, options_, power, indoor);
  } catch (const NumericalBlowupError&) {
    return ObjectiveScores{kFailedScore, kFailedScore, true};
  }
  ObjectiveScores s;
  s.temperature_mape = temperature_mape(indoor, window_.indoor_temp->values());
  s.power_median_abs = power_median_abs_error(power, window_.power->values());
  if (!std::isfinite(s.temperature_mape) || !std::isfinite(s.power_median_abs)) {
    return ObjectiveScores{kFailedScore, kFailedScore, true};
  }
  return s;
}

SimulationResult CalibrationProblem::simulate(const RcParameters& params) const {
  return rcplan::simulate(params, config_, window_, initial_, schedule_, options_);
}

ObjectiveScores evaluate_candidate(const RcParameters& params, const BuildingConfig& config, const InputBundle& bundle,
                                   const ModelOptions& options) {
  return CalibrationProblem(config, bundle, options).evaluate(params);
}

// --- GeneEncoding ------------------------------------------------------------------

namespace {

constexpr std::size_t kLogScaled = 8;  // six resistances and two capacitances

}  // namespace

GeneEncoding::GeneEncoding(const ParameterBounds& bounds) : bounds_(bounds) {
  bounds_.validate();
  const auto lo = bounds_.lower.to_array();
  const auto hi = bounds_.upper.to_array();
  for (std::size_t i = 0; i < RcParameters::kCount; ++i) {
    box_.lower.push_back(i < kLogScaled ? std::log10(lo[i]) : lo[i]);
    box_.upper.push_back(i < kLogScaled ? std::log10(hi[i]) : hi[i]);
  }
}

std::vector<double> GeneEncoding::encode(const RcParameters& p) const {
  const auto v = p.to_array();
  std::vector<double> genes(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) genes[i] = i < kLogScaled ? std::log10(v[i]) : v[i];
  return box_.clamp(std::move(genes));
}

RcParameters GeneEncoding::decode(std::span<const double> genes) const {
  const auto lo = bounds_.lower.to_array();
  const auto hi = bounds_.upper.to_array();
  std::array<double, RcParameters::kCount> v{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::clamp(i < kLogScaled ? std::pow(10.0, genes[i]) : genes[i], lo[i], hi[i]);
  }
  return RcParameters::from_array(v);
}

// --- Selection and gate --------------------------------------------------------------

std::size_t topsis_select(const ParetoFront& front) {
  std::vector<ObjectiveVector> scores;
  scores.reserve(front.candidates.size());
  for (const auto& c : front.candidates) scores.push_back(c.scores.as_vector());
  return topsis_select(std::span<const ObjectiveVector>(scores)).index;
}

AccuracyReport accuracy_gate(const ParetoCandidate& selected, const CalibrationProblem& problem,
                             const AccuracyThresholds& thresholds) {
  const auto actual_power = problem.window().power->values();
  const auto [lo, hi] = std::minmax_element(actual_power.begin(), actual_power.end());
  const double range = *hi - *lo;
  if (!(range > 0)) throw DegenerateInputError("actual power range is zero; relative power error undefined");

  const std::size_t n = problem.window().length();
  std::vector<double> power(n), indoor(n);
  try {
    simulate_into(selected.params, problem.config(), problem.window(), problem.initial_state(),
                  SetpointSchedule::from_config(problem.config()), problem.options(), power, indoor);
  } catch (const NumericalBlowupError&) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return make_accuracy_report(inf, inf, inf, range, thresholds);  // inf < threshold is false
  }
  const auto actual_temp = problem.window().indoor_temp->values();
  return make_accuracy_report(median_abs_error(indoor, actual_temp), temperature_mape(indoor, actual_temp),
                              power_median_abs_error(power, actual_power), range, thresholds);
}

// --- Pipeline ------------------------------------------------------------------------

CalibrationResult calibrate(const InputBundle& history, const BuildingConfig& config, const ParameterBounds& bounds,
                            const CalibrationSettings& settings, std::uint64_t seed) {
  if (settings.window_days < 1) throw ConfigError("calibration window must be at least one day");
  const std::size_t steps_per_day = static_cast<std::size_t>(std::chrono::days{1} / kGridStep);
  const std::size_t needed = settings.window_days * steps_per_day;
  const std::size_t available = history.is_aligned() ? history.length() : 0;
  if (available < needed) {
    throw InsufficientHistoryError(fmt::format("history holds {} steps ({:.2f} days); calibration needs {} days",
                                               available, static_cast<double>(available) / steps_per_day,
                                               settings.window_days));
  }
  const InputBundle window = history.slice(available - needed, needed);
  const CalibrationProblem problem(config, window, settings.model);
  const GeneEncoding encoding(bounds);

  const Evaluator evaluator = [&](std::span<const double> genes) {
    return problem.evaluate(encoding.decode(genes)).as_vector();
  };
  const auto population = nsga2(evaluator, encoding.box(), settings.ga, seed);

  CalibrationResult result;
  result.seed = seed;
  result.window = window_of(window);
  for (const auto& ind : population) {
    const bool failed = ind.objectives[0] >= kFailedScore || ind.objectives[1] >= kFailedScore;
    result.front.candidates.push_back(
        ParetoCandidate{encoding.decode(ind.genes), ObjectiveScores{ind.objectives[0], ind.objectives[1], failed}});
  }
  result.selected_index = topsis_select(result.front);
  result.selected = result.front.candidates[result.selected_index];
  result.accuracy = accuracy_gate(result.selected, problem, settings.thresholds);
  return result;
}

}  // namespace rcplan
