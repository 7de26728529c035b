#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rcplan/calibration.hpp"
#include "rcplan/evaluation.hpp"
#include "rcplan/scheduler.hpp"
#include "rcplan/thermal_model.hpp"

namespace rcplan {

/// Six significant digits, the precision of every report.
std::string format6(double value);
/// `value` rounded to six significant digits (for JSON output).
double round6(double value);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// timestamp, power_kW, T_i, T_h (outer surface), T_s (inner surface), T_m (wall core), setpoint
std::string simulation_csv(const SimulationResult& sim);

/// One row per front member with parameters, both objectives and the selection flag.
std::string pareto_csv(const ParetoFront& front, std::size_t selected_index);

nlohmann::json accuracy_json(const AccuracyReport& r);
nlohmann::json calibration_report_json(const CalibrationResult& result);

/// Selected parameters at full precision, with the gate verdict that
/// downstream commands check.
nlohmann::json parameters_file_json(const RcParameters& params, bool gate_passed);
struct ParametersFile {
  RcParameters params;
  bool gate_passed = false;
};
ParametersFile read_parameters_file(const std::filesystem::path& path);

nlohmann::json decision_json(const DecisionVector& theta);
nlohmann::json solution_json(const ScheduleSolution& sol, const OptimizationSpec& spec);

/// date, savings_kwh, savings_percent, then mean and sd rows.
std::string savings_csv(const SavingsReport& report);
/// date, power_error_kw, power_error_percent, temp_error_percent, then mean and sd rows.
std::string errors_csv(const ErrorReport& report);

/// timestamp, actual_power_kw, forecast_opt_power_kw, forecast_nonopt_power_kw
std::string plot_data_csv(const TimeSeries& actual, const TimeSeries* forecast_opt, const TimeSeries& forecast_nonopt);

}  // namespace rcplan
