#include "rcplan/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rcplan/calibration.hpp"
#include "rcplan/config.hpp"
#include "rcplan/error.hpp"
#include "rcplan/evaluation.hpp"
#include "rcplan/report.hpp"
#include "rcplan/scheduler.hpp"

#ifndef RCPLAN_VERSION
#define RCPLAN_VERSION "0.0.0"
#endif

namespace rcplan {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = kDefaultSeed;
  std::string mode;
  bool force = false;
  int threads = -1;
  std::string history;
  std::string weather;
  std::string params;
  std::string forecast;
  std::string actual;
  std::string baseline;
  std::string weather_forecast;
  std::string weather_measured;
};

struct Run {
  const Options& opt;
  ProjectConfig cfg;
  fs::path out;
  std::ostream& log;
};

LocalTime ceil_to_grid(LocalTime t) {
  const auto m = t.time_since_epoch().count();
  const auto g = kGridStep.count();
  const auto r = ((m % g) + g) % g;
  return r == 0 ? t : t + Minutes{g - r};
}

LocalTime floor_to_grid(LocalTime t) {
  const auto m = t.time_since_epoch().count();
  const auto g = kGridStep.count();
  return t - Minutes{((m % g) + g) % g};
}

ColumnSpec restrict(const ColumnSpec& spec, std::initializer_list<Role> roles) {
  ColumnSpec out = spec;
  out.columns.clear();
  for (Role r : roles) {
    if (auto it = spec.columns.find(r); it != spec.columns.end()) out.columns.insert(*it);
  }
  return out;
}

/// Adds `optional` roles of `spec` whose column appears in the file header.
ColumnSpec with_present(const fs::path& path, const ColumnSpec& base, const ColumnSpec& spec,
                        std::initializer_list<Role> optional) {
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::vector<std::string> names;
  std::stringstream ss(header);
  for (std::string cell; std::getline(ss, cell, ',');) names.push_back(cell);
  ColumnSpec out = base;
  for (Role r : optional) {
    auto it = spec.columns.find(r);
    if (it != spec.columns.end() && std::find(names.begin(), names.end(), it->second) != names.end()) {
      out.columns.insert(*it);
    }
  }
  return out;
}

/// Columns of the CSV files this tool writes.
ColumnSpec output_columns() {
  ColumnSpec c;
  c.columns = {{Role::power, "power_kW"}, {Role::indoor_temp, "T_i"}};
  c.power_unit = Unit::kilowatt;
  return c;
}

/// Reads a CSV and aligns it onto the 15-minute grid over the span every
/// column covers. Missing schedules are generated from the weekly template.
InputBundle load_aligned(const fs::path& path, const ColumnSpec& spec, const ProjectConfig& cfg,
                         bool needs_schedules) {
  const InputBundle raw = ingest_csv(path, spec);
  std::optional<LocalTime> first, last;
  auto cover = [&](LocalTime o, LocalTime l) {
    first = first ? std::max(*first, o) : o;
    last = last ? std::min(*last, l) : l;
  };
  if (raw.power) cover(raw.power->origin(), raw.power->last_time());
  if (raw.indoor_temp) cover(raw.indoor_temp->origin(), raw.indoor_temp->last_time());
  if (raw.external_temp) cover(raw.external_temp->origin(), raw.external_temp->last_time());
  if (raw.solar_irradiance) cover(raw.solar_irradiance->origin(), raw.solar_irradiance->last_time());
  if (raw.occupancy) cover(raw.occupancy->origin(), raw.occupancy->last_time());
  if (raw.ventilation) cover(raw.ventilation->origin(), raw.ventilation->last_time());
  if (!first) throw ConfigError(fmt::format("{}: no column to read", path.string()));
  const TimeWindow window{ceil_to_grid(*first), floor_to_grid(*last) + kGridStep};
  if (window.end <= window.start) throw InsufficientDataError(fmt::format("{}: no complete grid step", path.string()));
  InputBundle aligned = align(raw, window, cfg.align);

  if (needs_schedules && (!aligned.occupancy || !aligned.ventilation)) {
    if (!cfg.schedule) {
      throw ConfigError(fmt::format("{}: occupancy/ventilation columns absent and no weekly schedule configured",
                                    path.string()));
    }
    auto [occ, vent] = generate_schedules(*cfg.schedule, aligned.origin(), aligned.length());
    if (!aligned.occupancy) aligned.occupancy = std::move(occ);
    if (!aligned.ventilation) aligned.ventilation = std::move(vent);
  }
  return aligned;
}

std::string required(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(fmt::format("missing required option {}", flag));
  return value;
}

/// Full 96-step days of an aligned bundle: (first index, date).
std::vector<std::size_t> full_day_starts(const InputBundle& b) {
  std::vector<std::size_t> starts;
  const std::size_t per_day = static_cast<std::size_t>(std::chrono::days{1} / kGridStep);
  const std::size_t n = b.length();
  for (std::size_t k = 0; k + per_day <= n; ++k) {
    if (minute_of_day(b.origin() + static_cast<int>(k) * kGridStep) == 0) {
      starts.push_back(k);
      k += per_day - 1;
    }
  }
  return starts;
}

std::chrono::year_month_day date_at(LocalTime t) {
  return std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(t)};
}

int cmd_simulate(Run& run) {
  const auto params = read_parameters_file(required(run.opt.params, "--params")).params;
  const InputBundle data = load_aligned(required(run.opt.history, "--history"), run.cfg.columns, run.cfg, true);
  if (!data.indoor_temp) throw ConfigError("simulation needs a measured indoor temperature for the initial state");
  const auto sim = simulate(params, run.cfg.building, data, initial_state_from_history(data), std::nullopt,
                            run.cfg.calibration.model);
  write_text(run.out / "simulation.csv", simulation_csv(sim));
  run.log << fmt::format("simulated {} steps\n", data.length());
  return kExitOk;
}

int cmd_calibrate(Run& run) {
  const InputBundle history = load_aligned(required(run.opt.history, "--history"), run.cfg.columns, run.cfg, true);
  const CalibrationResult result =
      calibrate(history, run.cfg.building, run.cfg.bounds, run.cfg.calibration, run.opt.seed);
  write_json(run.out / "calibration_report.json", calibration_report_json(result));
  write_text(run.out / "pareto.csv", pareto_csv(result.front, result.selected_index));
  write_json(run.out / "parameters.json", parameters_file_json(result.selected.params, result.accuracy.pass));
  const auto& a = result.accuracy;
  run.log << fmt::format("front of {}; selected #{}: median |dT| {} C, temp MAPE {}%, power error {}% -> gate {}\n",
                         result.front.candidates.size(), result.selected_index, format6(a.median_abs_temp_error),
                         format6(a.relative_temp_error), format6(a.relative_power_error), a.pass ? "passed" : "FAILED");
  return a.pass ? kExitOk : kExitQuality;
}

int cmd_forecast(Run& run) {
  const auto params = read_parameters_file(required(run.opt.params, "--params")).params;
  const InputBundle data = load_aligned(required(run.opt.history, "--history"), run.cfg.columns, run.cfg, true);
  const CalibrationProblem problem(run.cfg.building, data, run.cfg.calibration.model);
  const auto sim = problem.simulate(params);
  const ObjectiveScores scores = problem.evaluate(params);
  const AccuracyReport accuracy =
      accuracy_gate(ParetoCandidate{params, scores}, problem, run.cfg.calibration.thresholds);
  write_text(run.out / "forecast.csv", simulation_csv(sim));

  json report{{"window", {{"start", format_timestamp(window_of(data).start)}, {"end", format_timestamp(window_of(data).end)}}},
              {"objectives",
               {{"temp_mape_percent", round6(scores.temperature_mape)},
                {"power_median_abs_kw", round6(scores.power_median_abs / 1000.0)}}},
              {"accuracy", accuracy_json(accuracy)}};
  const auto days = full_day_starts(data);
  if (!days.empty()) {
    std::vector<std::chrono::year_month_day> dates;
    std::vector<DailyError> errors;
    const std::size_t n = static_cast<std::size_t>(std::chrono::days{1} / kGridStep);
    for (std::size_t k : days) {
      dates.push_back(date_at(data.indoor_temp->time_at(k)));
      errors.push_back(daily_error_report(sim.power.values().subspan(k, n), sim.indoor_temp.values().subspan(k, n),
                                          data.power->values().subspan(k, n), data.indoor_temp->values().subspan(k, n)));
    }
    write_text(run.out / "errors.csv", errors_csv(error_summary(std::move(dates), std::move(errors))));
  }
  write_json(run.out / "forecast_report.json", report);
  run.log << fmt::format("temp MAPE {}%, power median abs error {} kW\n", format6(scores.temperature_mape),
                         format6(scores.power_median_abs / 1000.0));
  return kExitOk;
}

int cmd_optimize(Run& run) {
  const ParametersFile pf = read_parameters_file(required(run.opt.params, "--params"));
  if (!pf.gate_passed && !run.opt.force) {
    throw ConfigError("parameters did not pass the accuracy gate; rerun with --force to use them anyway");
  }
  const InputBundle history = load_aligned(required(run.opt.history, "--history"), run.cfg.columns, run.cfg, true);
  if (!history.indoor_temp) throw ConfigError("history needs a measured indoor temperature");
  const fs::path weather_file = required(run.opt.weather, "--weather");
  const ColumnSpec weather_cols =
      with_present(weather_file, restrict(run.cfg.columns, {Role::external_temp, Role::solar_irradiance}),
                   run.cfg.columns, {Role::occupancy, Role::ventilation});
  const InputBundle weather = load_aligned(weather_file, weather_cols, run.cfg, true);

  // Wall temperature is unmeasured: carry it over from simulating the history.
  const auto past = simulate(pf.params, run.cfg.building, history, initial_state_from_history(history), std::nullopt,
                             run.cfg.calibration.model);
  const ThermalState initial{history.indoor_temp->values().back(), past.final_state.wall};

  const auto days = full_day_starts(weather);
  if (days.empty()) throw InsufficientDataError("weather forecast does not cover a full day from midnight");
  const std::size_t n = static_cast<std::size_t>(std::chrono::days{1} / kGridStep);
  const ForecastDay day{weather.slice(days.front(), n), initial};

  OptimizationSpec spec = run.cfg.optimization;
  spec.seed = run.opt.seed;
  const ScheduleSolution sol = optimize_schedule(pf.params, run.cfg.building, day, spec);
  write_json(run.out / "solution.json", solution_json(sol, spec));

  const auto predicted =
      simulate(pf.params, run.cfg.building, day.inputs, initial, to_schedule(run.cfg.building, sol.theta));
  const auto baseline = simulate(pf.params, run.cfg.building, day.inputs, initial, std::nullopt);
  write_text(run.out / "predicted.csv", simulation_csv(predicted));
  write_text(run.out / "baseline.csv", simulation_csv(baseline));

  run.log << fmt::format("day start {}, night start {}, energy {} kWh, constraint {} C, {}\n",
                         format_clock(sol.theta.day_start), format_clock(sol.theta.night_start),
                         format6(sol.predicted_energy_kwh), format6(sol.constraint_value),
                         sol.feasible ? "feasible" : "INFEASIBLE");
  return sol.feasible ? kExitOk : kExitQuality;
}

std::pair<InputBundle, InputBundle> common_span(InputBundle a, InputBundle b) {
  const LocalTime start = std::max(a.origin(), b.origin());
  const LocalTime end = std::min(window_of(a).end, window_of(b).end);
  if (end <= start) throw CoverageError("the two files do not overlap in time");
  const TimeWindow w{start, end};
  return {align(a, w, AlignOptions{DstRule::none}), align(b, w, AlignOptions{DstRule::none})};
}

int cmd_evaluate(Run& run) {
  const Options& o = run.opt;
  bool did_something = false;
  const ColumnSpec measured_power = restrict(run.cfg.columns, {Role::power, Role::indoor_temp});

  if (!o.baseline.empty() || !o.actual.empty()) {
    if (!o.actual.empty() && !o.baseline.empty()) {
      ColumnSpec power_only = output_columns();
      power_only.columns.erase(Role::indoor_temp);
      auto [baseline, actual] = common_span(load_aligned(o.baseline, power_only, run.cfg, false),
                                            load_aligned(o.actual, restrict(run.cfg.columns, {Role::power}), run.cfg, false));
      const SavingsReport report =
          period_summary(daily_savings(*baseline.power, *actual.power, run.cfg.savings_window));
      write_text(run.out / "savings.csv", savings_csv(report));
      std::optional<TimeSeries> opt_power;
      if (!o.forecast.empty()) {
        InputBundle f = load_aligned(o.forecast, power_only, run.cfg, false);
        auto [fa, fb] = common_span(std::move(f), baseline);
        if (fa.length() != baseline.length()) throw CoverageError("optimized forecast does not cover the baseline span");
        opt_power = fa.power;
      }
      write_text(run.out / "plot_data.csv",
                 plot_data_csv(*actual.power, opt_power ? &*opt_power : nullptr, *baseline.power));
      run.log << fmt::format("savings over {} day(s): mean {} kWh, {}%\n", report.days.size(),
                             format6(report.kwh.mean), format6(report.percent.mean));
      did_something = true;
    }
    if (!o.actual.empty() && !o.forecast.empty()) {
      auto [forecast, actual] = common_span(load_aligned(o.forecast, output_columns(), run.cfg, false),
                                            load_aligned(o.actual, measured_power, run.cfg, false));
      forecast.require({Role::power, Role::indoor_temp});
      actual.require({Role::power, Role::indoor_temp});
      const auto days = full_day_starts(actual);
      if (days.empty()) throw InsufficientDataError("error report needs at least one full day from midnight");
      const std::size_t n = static_cast<std::size_t>(std::chrono::days{1} / kGridStep);
      std::vector<std::chrono::year_month_day> dates;
      std::vector<DailyError> errors;
      for (std::size_t k : days) {
        dates.push_back(date_at(actual.power->time_at(k)));
        errors.push_back(daily_error_report(forecast.power->values().subspan(k, n),
                                            forecast.indoor_temp->values().subspan(k, n),
                                            actual.power->values().subspan(k, n),
                                            actual.indoor_temp->values().subspan(k, n)));
      }
      const ErrorReport report = error_summary(std::move(dates), std::move(errors));
      write_text(run.out / "errors.csv", errors_csv(report));
      run.log << fmt::format("errors over {} day(s): mean {} kW, {}%, temp {}%\n", report.days.size(),
                             format6(report.power_kw.mean), format6(report.power_percent.mean),
                             format6(report.temp_percent.mean));
      did_something = true;
    }
  }

  if (!o.weather_forecast.empty() || !o.weather_measured.empty()) {
    const ColumnSpec weather_cols = restrict(run.cfg.columns, {Role::external_temp, Role::solar_irradiance});
    auto [f, m] = common_span(load_aligned(required(o.weather_forecast, "--weather-forecast"), weather_cols, run.cfg, false),
                              load_aligned(required(o.weather_measured, "--weather-measured"), weather_cols, run.cfg, false));
    std::string csv = "variable,mean_relative_percent,mean_abs,max_abs,excluded\n";
    auto row = [&](const char* name, const std::optional<TimeSeries>& a, const std::optional<TimeSeries>& b) {
      if (!a || !b) return;
      const WeatherErrorStats s = weather_error_stats(a->values(), b->values());
      csv += fmt::format("{},{},{},{},{}\n", name, format6(s.mean_relative_percent), format6(s.mean_abs),
                         format6(s.max_abs), s.excluded);
    };
    row("external_temp", f.external_temp, m.external_temp);
    row("solar_irradiance", f.solar_irradiance, m.solar_irradiance);
    write_text(run.out / "weather_errors.csv", csv);
    did_something = true;
  }

  if (!did_something) {
    throw ConfigError(
        "evaluate needs --baseline with --actual, --forecast with --actual, or --weather-forecast with --weather-measured");
  }
  return kExitOk;
}

json manifest(const std::string& subcommand, const Options& o, double seconds, int exit_code) {
  json inputs = json::object();
  auto add = [&](const char* key, const std::string& v) {
    if (!v.empty()) inputs[key] = v;
  };
  add("history", o.history);
  add("weather", o.weather);
  add("params", o.params);
  add("forecast", o.forecast);
  add("actual", o.actual);
  add("baseline", o.baseline);
  add("weather_forecast", o.weather_forecast);
  add("weather_measured", o.weather_measured);
  return json{{"subcommand", subcommand}, {"inputs", inputs},         {"config", o.config},
              {"seed", o.seed},           {"output_directory", o.out}, {"version", RCPLAN_VERSION},
              {"duration_seconds", seconds}, {"exit_code", exit_code}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Grey-box thermal model calibration and set-point planning"};
  app.set_version_flag("--version", RCPLAN_VERSION);
  app.require_subcommand(1);
  app.add_option("--config", o.config, "project configuration (JSON)")->required();
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--mode", o.mode, "override building mode")->check(CLI::IsMember({"heating", "cooling"}));
  app.add_flag("--force", o.force, "use parameters that failed the accuracy gate");
  app.add_option("--threads", o.threads, "worker threads for calibration and optimization (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  auto* simulate_cmd = app.add_subcommand("simulate", "run the model over a data file");
  simulate_cmd->add_option("--history", o.history, "data CSV (weather, schedules, indoor temperature)");
  simulate_cmd->add_option("--params", o.params, "parameters file");

  auto* calibrate_cmd = app.add_subcommand("calibrate", "fit model parameters to measured history");
  calibrate_cmd->add_option("--history", o.history, "measured history CSV");

  auto* forecast_cmd = app.add_subcommand("forecast", "score calibrated parameters on measured data");
  forecast_cmd->add_option("--history", o.history, "measured data CSV");
  forecast_cmd->add_option("--params", o.params, "parameters file");

  auto* optimize_cmd = app.add_subcommand("optimize", "plan the next day's set-point schedule");
  optimize_cmd->add_option("--history", o.history, "recent measured data CSV (for the initial state)");
  optimize_cmd->add_option("--weather", o.weather, "next-day weather forecast CSV");
  optimize_cmd->add_option("--params", o.params, "parameters file");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "savings and error statistics");
  evaluate_cmd->add_option("--baseline", o.baseline, "non-optimized power forecast CSV");
  evaluate_cmd->add_option("--forecast", o.forecast, "model forecast CSV (power and indoor temperature)");
  evaluate_cmd->add_option("--actual", o.actual, "measured power/indoor temperature CSV");
  evaluate_cmd->add_option("--weather-forecast", o.weather_forecast, "forecast weather CSV");
  evaluate_cmd->add_option("--weather-measured", o.weather_measured, "measured weather CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  const auto started = std::chrono::steady_clock::now();
  int code = kExitError;
  bool out_ready = false;
  try {
    std::optional<Mode> mode;
    if (!o.mode.empty()) mode = parse_mode(o.mode);
    Run run{o, load_config(o.config, mode), fs::path(o.out), out};
    if (o.threads >= 0) {
      run.cfg.calibration.ga.threads = static_cast<unsigned>(o.threads);
      run.cfg.optimization.threads = static_cast<unsigned>(o.threads);
    }
    fs::create_directories(run.out);
    out_ready = true;
    if (subcommand == "simulate") code = cmd_simulate(run);
    else if (subcommand == "calibrate") code = cmd_calibrate(run);
    else if (subcommand == "forecast") code = cmd_forecast(run);
    else if (subcommand == "optimize") code = cmd_optimize(run);
    else code = cmd_evaluate(run);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }

  if (!out_ready) {
    std::error_code ec;
    out_ready = fs::create_directories(o.out, ec) || fs::is_directory(o.out, ec);
  }
  if (out_ready) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    try {
      write_json(fs::path(o.out) / "manifest.json", manifest(subcommand, o, seconds, code));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      code = kExitError;
    }
  }
  return code;
}

}  // namespace rcplan
