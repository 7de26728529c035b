#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "rcplan/calibration.hpp"
#include "rcplan/evaluation.hpp"
#include "rcplan/schedule_template.hpp"
#include "rcplan/scheduler.hpp"
#include "rcplan/thermal_model.hpp"
#include "rcplan/timeseries.hpp"

namespace rcplan {

/// Everything a pipeline run needs besides its data files.
struct ProjectConfig {
  BuildingConfig building;
  ColumnSpec columns;
  std::optional<WeeklyTemplate> schedule;
  ParameterBounds bounds = ParameterBounds::defaults();
  CalibrationSettings calibration;
  OptimizationSpec optimization;
  SavingsWindow savings_window;
  AlignOptions align;
};

/// Default CSV header for each role.
ColumnSpec default_columns();

/**
 * Reads a JSON project file. Sections: building, columns, schedule (inline)
 * or schedule_file, bounds, calibration, optimization, model,
 * savings_window, align. Every key is optional; unknown keys are rejected
 * with their full dotted path. Powers are given in kW.
 *
 * `mode_override` replaces building.mode before mode-dependent defaults
 * (comfort temperature, savings window) are filled in. Relative paths are
 * resolved against `base_dir`.
 */
ProjectConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                           std::optional<Mode> mode_override = std::nullopt);
ProjectConfig load_config(const std::filesystem::path& path, std::optional<Mode> mode_override = std::nullopt);

/// Parameters as {"r_i": ..., ...}; every key required, none extra.
RcParameters parameters_from_json(const nlohmann::json& j, const std::string& context = "parameters");
nlohmann::json parameters_to_json(const RcParameters& p);

}  // namespace rcplan
