#pragma once

#include <cstdint>
#include <vector>

#include "rcplan/nsga2.hpp"
#include "rcplan/thermal_model.hpp"
#include "rcplan/timeseries.hpp"

namespace rcplan {

/// Score attached to a candidate whose simulation failed: dominated by any
/// candidate that simulates.
inline constexpr double kFailedScore = 1e30;

struct ObjectiveScores {
  double temperature_mape = 0;  ///< % (f1)
  double power_median_abs = 0;  ///< W (f2)
  bool failed = false;

  ObjectiveVector as_vector() const { return {temperature_mape, power_median_abs}; }
  bool operator==(const ObjectiveScores&) const = default;
};

struct ParetoCandidate {
  RcParameters params;
  ObjectiveScores scores;
};

/// Mutually non-dominated candidates.
struct ParetoFront {
  std::vector<ParetoCandidate> candidates;

  /// O(n^2) check that no member dominates another.
  bool is_mutually_nondominated() const;
};

struct AccuracyThresholds {
  double abs_temp_c = 1.0;       ///< median |forecast - actual| indoor temperature
  double rel_temp_percent = 5.0; ///< temperature MAPE
  double rel_power_percent = 12.0;  ///< median |power error| / actual power range
};

struct AccuracyReport {
  double median_abs_temp_error = 0;  ///< degC
  double relative_temp_error = 0;    ///< %
  double relative_power_error = 0;   ///< %
  double power_median_abs = 0;       ///< W
  double power_range = 0;            ///< W, actual max - min
  AccuracyThresholds thresholds;
  bool pass = false;
};

/// Gate on three strict inequalities.
AccuracyReport make_accuracy_report(double median_abs_temp_error, double relative_temp_error,
                                    double power_median_abs, double power_range,
                                    const AccuracyThresholds& thresholds = {});

/**
 * Simulates candidates over a fixed calibration window and scores them
 * against the measurements. The initial state comes from the first
 * measurement and the set-points from the building's day/night schedule.
 * Thread-safe: `evaluate` may be called concurrently.
 */
class CalibrationProblem {
 public:
  CalibrationProblem(BuildingConfig config, InputBundle window, ModelOptions options = {});

  /// Simulation failures are reported as `failed` with kFailedScore scores.
  ObjectiveScores evaluate(const RcParameters& params) const;

  /// Forecast indoor temperature and power for `params` (throws on blowup).
  SimulationResult simulate(const RcParameters& params) const;

  const InputBundle& window() const { return window_; }
  const BuildingConfig& config() const { return config_; }
  const ThermalState& initial_state() const { return initial_; }
  const ModelOptions& options() const { return options_; }

 private:
  BuildingConfig config_;
  InputBundle window_;
  ModelOptions options_;
  ThermalState initial_;
  SetpointSchedule schedule_;
};

ObjectiveScores evaluate_candidate(const RcParameters& params, const BuildingConfig& config, const InputBundle& bundle,
                                   const ModelOptions& options = {});

/**
 * Maps parameters to GA genes: resistances and capacitances are searched in
 * log10 space (their bounds span several decades), gains and the radiative
 * fraction linearly.
 */
class GeneEncoding {
 public:
  explicit GeneEncoding(const ParameterBounds& bounds);
  const Box& box() const { return box_; }
  std::vector<double> encode(const RcParameters& p) const;
  RcParameters decode(std::span<const double> genes) const;

 private:
  ParameterBounds bounds_;
  Box box_;
};

/// Picks the TOPSIS best compromise of a front.
std::size_t topsis_select(const ParetoFront& front);

AccuracyReport accuracy_gate(const ParetoCandidate& selected, const CalibrationProblem& problem,
                             const AccuracyThresholds& thresholds = {});

struct CalibrationSettings {
  std::size_t window_days = 28;
  Nsga2Settings ga;
  AccuracyThresholds thresholds;
  ModelOptions model;
};

struct CalibrationResult {
  ParetoFront front;
  std::size_t selected_index = 0;
  ParetoCandidate selected;
  AccuracyReport accuracy;
  TimeWindow window;
  std::uint64_t seed = 0;
};

/**
 * Full pipeline on the most recent `window_days` of an aligned history:
 * NSGA-II over the parameter box, TOPSIS selection, accuracy gate. The front
 * is returned whatever the gate outcome.
 */
CalibrationResult calibrate(const InputBundle& history, const BuildingConfig& config, const ParameterBounds& bounds,
                            const CalibrationSettings& settings, std::uint64_t seed);

}  // namespace rcplan
