#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "rcplan/config.hpp"
#include "rcplan/error.hpp"

using namespace rcplan;
using nlohmann::json;

namespace {

std::string error_of(const json& j) {
  try {
    parse_config(j, ".");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty configuration gives the defaults") {
  const ProjectConfig cfg = parse_config(json::object(), ".");
  CHECK(cfg.building.mode == Mode::heating);
  CHECK(cfg.calibration.window_days == 28);
  CHECK(cfg.calibration.ga.population == 80);
  CHECK(cfg.calibration.ga.generations == 150);
  CHECK(cfg.optimization.comfort_temp == 23);
  CHECK(cfg.optimization.multistart_count == 20);
  CHECK(cfg.optimization.mads.max_evaluations == 500);
  CHECK(cfg.savings_window.start == 240);
  CHECK(cfg.savings_window.end == 1200);
  CHECK(cfg.columns.columns.at(Role::power) == "power_kw");
  CHECK(cfg.align.dst_rule == DstRule::eu);
  CHECK_FALSE(cfg.schedule.has_value());
}

TEST_CASE("building section in kW") {
  const json j = json::parse(R"({
    "building": {"p_min_kw": 0, "p_max_kw": 800, "day_start": "05:30", "day_end": "19:00",
                 "day_setpoint": 22}
  })");
  const ProjectConfig cfg = parse_config(j, ".");
  CHECK(cfg.building.p_max == 800e3);
  CHECK(cfg.building.day_start == 330);
  CHECK(cfg.building.day_end == 1140);
  CHECK(cfg.building.day_setpoint == 22);
}

TEST_CASE("mode-dependent defaults and override") {
  const json cooling = json::parse(R"({"building": {"mode": "cooling", "p_min_kw": -500, "p_max_kw": 0}})");
  const ProjectConfig c = parse_config(cooling, ".");
  CHECK(c.optimization.mode == Mode::cooling);
  CHECK(c.optimization.comfort_temp == 24);
  CHECK_FALSE(c.optimization.space.night_setpoint);
  CHECK(c.savings_window.start == 19 * 60);
  CHECK(c.savings_window.end == 22 * 60);

  const ProjectConfig h = parse_config(json::parse(R"({"building": {"mode": "cooling", "p_min_kw": 0,
                                                         "p_max_kw": 0}})"),
                                       ".", Mode::heating);
  CHECK(h.building.mode == Mode::heating);
  CHECK(h.optimization.comfort_temp == 23);

  CHECK(parse_config(json::parse(R"({"optimization": {"comfort_temp": 21.5}})"), ".").optimization.comfort_temp ==
        21.5);
}

TEST_CASE("unknown keys are named with their path") {
  CHECK(error_of(json::parse(R"({"bulding": {}})")).find("'bulding'") != std::string::npos);
  CHECK(error_of(json::parse(R"({"building": {"pmax_kw": 5}})")).find("'building.pmax_kw'") != std::string::npos);
  CHECK(error_of(json::parse(R"({"calibration": {"thresholds": {"abs": 1}}})"))
            .find("'calibration.thresholds.abs'") != std::string::npos);
}

TEST_CASE("invalid values are rejected") {
  CHECK_FALSE(error_of(json::parse(R"({"building": {"p_max_kw": "lots"}})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"building": {"mode": "venting"}})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"building": {"day_start": "25:00"}})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"calibration": {"population": 7}})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"optimization": {"comfort_start": "20:00", "comfort_end": "08:00"}})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"columns": {"power_unit": "MW"}})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"align": {"dst_rule": "us"}})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"bounds": {"r_i": [1, 0.5]}})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"model": {"substeps": 0}})")).empty());
}

TEST_CASE("columns and schedule") {
  const json j = json::parse(R"({
    "columns": {"power": "P", "ventilation": null, "power_unit": "W"},
    "schedule": {"weekdays": {"occupancy": ["07:00", "19:00"], "ventilation": ["06:00", "20:00"]}}
  })");
  const ProjectConfig cfg = parse_config(j, ".");
  CHECK(cfg.columns.columns.at(Role::power) == "P");
  CHECK_FALSE(cfg.columns.columns.contains(Role::ventilation));
  CHECK(cfg.columns.power_unit == Unit::watt);
  REQUIRE(cfg.schedule.has_value());

  const auto dir = std::filesystem::temp_directory_path() / "rcplan_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "week.json") << j["schedule"].dump();
  std::ofstream(dir / "project.json") << R"({"schedule_file": "week.json"})";
  const ProjectConfig from_file = load_config(dir / "project.json");
  REQUIRE(from_file.schedule.has_value());
  CHECK(*from_file.schedule == *cfg.schedule);

  CHECK_FALSE(error_of(json::parse(R"({"schedule": {}, "schedule_file": "x.json"})")).empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("parameter files round trip") {
  RcParameters p;
  p.interior_convective_resistance = 1.234567890123e-5;
  p.wall_outer_resistance = 2e-5;
  p.wall_inner_resistance = 3e-5;
  p.infiltration_resistance = 4e-5;
  p.ventilation_resistance = 5e-5;
  p.exterior_convective_resistance = 6e-6;
  p.air_capacitance = 1e8;
  p.wall_capacitance = 2e9;
  p.occupancy_gain = 3e4;
  p.solar_gain = 12;
  p.radiative_fraction = 0.3;
  const json j = parameters_to_json(p);
  CHECK(parameters_from_json(json::parse(j.dump())) == p);

  json missing = j;
  missing.erase("a");
  CHECK_THROWS_AS(parameters_from_json(missing), ConfigError);
  json extra = j;
  extra["b"] = 1;
  CHECK_THROWS_AS(parameters_from_json(extra), ConfigError);
}
