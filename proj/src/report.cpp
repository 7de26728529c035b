#include "rcplan/report.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "rcplan/config.hpp"
#include "rcplan/error.hpp"

namespace rcplan {

using nlohmann::json;

std::string format6(double value) { return fmt::format("{:.6g}", value); }

double round6(double value) {
  if (!std::isfinite(value)) return value;
  return std::stod(format6(value));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(fmt::format("error while writing '{}'", path.string()));
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string simulation_csv(const SimulationResult& sim) {
  std::string out = "timestamp,power_kW,T_i,T_h,T_s,T_m,setpoint\n";
  for (std::size_t k = 0; k < sim.power.size(); ++k) {
    out += fmt::format("{},{},{},{},{},{},{}\n", format_timestamp(sim.power.time_at(k)), format6(sim.power[k] / 1000.0),
                       format6(sim.indoor_temp[k]), format6(sim.outer_surface_temp[k]),
                       format6(sim.inner_surface_temp[k]), format6(sim.wall_temp[k]), format6(sim.setpoint[k]));
  }
  return out;
}

std::string pareto_csv(const ParetoFront& front, std::size_t selected_index) {
  std::string out = "f1_percent,f2_watts";
  for (auto key : RcParameters::kKeys) out += fmt::format(",{}", key);
  out += ",failed,selected\n";
  for (std::size_t i = 0; i < front.candidates.size(); ++i) {
    const auto& c = front.candidates[i];
    out += format6(c.scores.temperature_mape) + "," + format6(c.scores.power_median_abs);
    for (double v : c.params.to_array()) out += "," + format6(v);
    out += fmt::format(",{},{}\n", c.scores.failed ? 1 : 0, i == selected_index ? 1 : 0);
  }
  return out;
}

json accuracy_json(const AccuracyReport& r) {
  return json{{"median_abs_temp_error_c", round6(r.median_abs_temp_error)},
              {"temp_mape_percent", round6(r.relative_temp_error)},
              {"power_median_abs_kw", round6(r.power_median_abs / 1000.0)},
              {"power_range_kw", round6(r.power_range / 1000.0)},
              {"power_error_percent", round6(r.relative_power_error)},
              {"thresholds",
               {{"abs_temp_c", r.thresholds.abs_temp_c},
                {"rel_temp_percent", r.thresholds.rel_temp_percent},
                {"rel_power_percent", r.thresholds.rel_power_percent}}},
              {"pass", r.pass}};
}

namespace {

json rounded_parameters(const RcParameters& p) {
  json j = json::object();
  const auto v = p.to_array();
  for (std::size_t i = 0; i < v.size(); ++i) j[std::string(RcParameters::kKeys[i])] = round6(v[i]);
  return j;
}

}  // namespace

json calibration_report_json(const CalibrationResult& result) {
  json front = json::array();
  for (const auto& c : result.front.candidates) {
    front.push_back({{"parameters", rounded_parameters(c.params)},
                     {"f1_percent", round6(c.scores.temperature_mape)},
                     {"f2_watts", round6(c.scores.power_median_abs)},
                     {"failed", c.scores.failed}});
  }
  const json params = rounded_parameters(result.selected.params);
  return json{{"window", {{"start", format_timestamp(result.window.start)}, {"end", format_timestamp(result.window.end)}}},
              {"seed", result.seed},
              {"front_size", result.front.candidates.size()},
              {"selected_index", result.selected_index},
              {"selected_parameters", params},
              {"objectives",
               {{"temp_mape_percent", round6(result.selected.scores.temperature_mape)},
                {"power_median_abs_kw", round6(result.selected.scores.power_median_abs / 1000.0)}}},
              {"accuracy", accuracy_json(result.accuracy)},
              {"front", front}};
}

json parameters_file_json(const RcParameters& params, bool gate_passed) {
  return json{{"parameters", parameters_to_json(params)}, {"gate_passed", gate_passed}};
}

ParametersFile read_parameters_file(const std::filesystem::path& path) {
  const json j = read_json(path);
  if (!j.is_object() || !j.contains("parameters")) {
    throw ConfigError(fmt::format("{}: expected an object with a 'parameters' member", path.string()));
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "parameters" && key != "gate_passed") throw ConfigError(fmt::format("{}: unknown key '{}'", path.string(), key));
  }
  ParametersFile f{parameters_from_json(j.at("parameters")), false};
  if (j.contains("gate_passed")) {
    if (!j.at("gate_passed").is_boolean()) throw ConfigError(fmt::format("{}: 'gate_passed' must be a boolean", path.string()));
    f.gate_passed = j.at("gate_passed").get<bool>();
  }
  return f;
}

json decision_json(const DecisionVector& theta) {
  json j{{"day_start", format_clock(theta.day_start)}, {"night_start", format_clock(theta.night_start)}};
  j["night_setpoint"] = theta.night_setpoint ? json(round6(*theta.night_setpoint)) : json(nullptr);
  return j;
}

json solution_json(const ScheduleSolution& sol, const OptimizationSpec& spec) {
  json starts = json::array();
  for (const auto& t : sol.starts) {
    starts.push_back({{"start", decision_json(t.start)},
                      {"local", decision_json(t.local)},
                      {"energy_kwh", t.feasible ? json(round6(watt_steps_to_kwh(t.objective))) : json(nullptr)},
                      {"constraint_c", round6(t.constraint)},
                      {"feasible", t.feasible},
                      {"evaluations", t.evaluations},
                      {"status", mads_status_name(t.status)}});
  }
  return json{{"mode", mode_name(spec.mode)},
              {"theta", decision_json(sol.theta)},
              {"predicted_energy_kwh", round6(sol.predicted_energy_kwh)},
              {"constraint_value_c", round6(sol.constraint_value)},
              {"feasible", sol.feasible},
              {"comfort_temp", spec.comfort_temp},
              {"comfort_window", {format_clock(spec.comfort_start), format_clock(spec.comfort_end)}},
              {"evaluations_used", sol.evaluations_used},
              {"seed", sol.seed},
              {"starts", starts}};
}

namespace {

std::string date_text(const std::chrono::year_month_day& d) {
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                     static_cast<unsigned>(d.day()));
}

}  // namespace

std::string savings_csv(const SavingsReport& report) {
  std::string out = "date,savings_kwh,savings_percent\n";
  for (const auto& d : report.days) {
    out += fmt::format("{},{},{}\n", date_text(d.date), format6(d.savings.kwh), format6(d.savings.percent));
  }
  out += fmt::format("mean,{},{}\n", format6(report.kwh.mean), format6(report.percent.mean));
  out += fmt::format("sd,{},{}\n", format6(report.kwh.sd), format6(report.percent.sd));
  return out;
}

std::string errors_csv(const ErrorReport& report) {
  std::string out = "date,power_error_kw,power_error_percent,temp_error_percent\n";
  for (std::size_t i = 0; i < report.days.size(); ++i) {
    const auto& d = report.days[i];
    out += fmt::format("{},{},{},{}\n", date_text(report.dates[i]), format6(d.power_error_kw),
                       format6(d.power_error_percent), format6(d.temp_error_percent));
  }
  out += fmt::format("mean,{},{},{}\n", format6(report.power_kw.mean), format6(report.power_percent.mean),
                     format6(report.temp_percent.mean));
  out += fmt::format("sd,{},{},{}\n", format6(report.power_kw.sd), format6(report.power_percent.sd),
                     format6(report.temp_percent.sd));
  return out;
}

std::string plot_data_csv(const TimeSeries& actual, const TimeSeries* forecast_opt, const TimeSeries& forecast_nonopt) {
  std::string out = "timestamp,actual_power_kw,forecast_opt_power_kw,forecast_nonopt_power_kw\n";
  for (std::size_t k = 0; k < actual.size(); ++k) {
    out += fmt::format("{},{},{},{}\n", format_timestamp(actual.time_at(k)), format6(actual[k] / 1000.0),
                       forecast_opt ? format6((*forecast_opt)[k] / 1000.0) : std::string(),
                       format6(forecast_nonopt[k] / 1000.0));
  }
  return out;
}

}  // namespace rcplan
