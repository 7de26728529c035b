#include "rcplan/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "rcplan/error.hpp"

namespace rcplan {

using nlohmann::json;

namespace {

/// Walks one JSON object, remembering which keys were consumed so the rest
/// can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(fmt::format("'{}' must be an object", path_));
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(fmt::format("'{}' must be a number", where(key)));
    out = v.get<double>();
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(fmt::format("'{}' must be a non-negative integer", where(key)));
    }
    out = static_cast<Int>(v.get<long long>());
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(fmt::format("'{}' must be true or false", where(key)));
    out = v.get<bool>();
  }

  std::optional<std::string> string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(fmt::format("'{}' must be a string", where(key)));
    return v.get<std::string>();
  }

  template <typename T>
  void clock(const std::string& key, T& out) {
    if (auto s = string(key)) {
      try {
        out = static_cast<T>(parse_clock(*s));
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("'{}': {}", where(key), e.what()));
      }
    }
  }

  /// [lo, hi] pair of numbers or of HH:MM strings.
  void range(const std::string& key, double& lo, double& hi, bool clock_times) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    auto bad = [&] {
      return ConfigError(fmt::format("'{}' must be a pair [{}]", where(key), clock_times ? "\"HH:MM\", \"HH:MM\"" : "lo, hi"));
    };
    if (!v.is_array() || v.size() != 2) throw bad();
    for (int i = 0; i < 2; ++i) {
      double& out = i == 0 ? lo : hi;
      if (clock_times) {
        if (!v[i].is_string()) throw bad();
        out = parse_clock(v[i].get<std::string>());
      } else {
        if (!v[i].is_number()) throw bad();
        out = v[i].get<double>();
      }
    }
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(j_.at(key), where(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(fmt::format("unknown configuration key '{}'", where(key)));
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

constexpr std::array<std::pair<Role, const char*>, 6> kRoleKeys{{{Role::power, "power"},
                                                                 {Role::indoor_temp, "indoor_temp"},
                                                                 {Role::external_temp, "external_temp"},
                                                                 {Role::solar_irradiance, "solar_irradiance"},
                                                                 {Role::occupancy, "occupancy"},
                                                                 {Role::ventilation, "ventilation"}}};

void read_building(Section s, BuildingConfig& b) {
  if (auto m = s.string("mode")) b.mode = parse_mode(*m);
  double p_min_kw = b.p_min / 1000.0, p_max_kw = b.p_max / 1000.0;
  s.number("p_min_kw", p_min_kw);
  s.number("p_max_kw", p_max_kw);
  b.p_min = p_min_kw * 1000.0;
  b.p_max = p_max_kw * 1000.0;
  s.number("day_setpoint", b.day_setpoint);
  s.number("night_setpoint", b.night_setpoint);
  s.clock("day_start", b.day_start);
  s.clock("day_end", b.day_end);
  s.number("volume_m3", b.volume);
  s.number("machine_efficiency", b.machine_efficiency);
  s.number("lhv_kwh_per_m3", b.lhv);
  s.finish();
}

void read_columns(Section s, ColumnSpec& c) {
  for (const auto& [role, key] : kRoleKeys) {
    if (!s.has(key)) continue;
    const json& v = s.raw(key);
    if (v.is_null()) {
      c.columns.erase(role);
    } else if (v.is_string()) {
      c.columns[role] = v.get<std::string>();
    } else {
      throw ConfigError(fmt::format("'{}' must be a column name or null", s.where(key)));
    }
  }
  if (auto unit = s.string("power_unit")) {
    if (*unit == "kW") c.power_unit = Unit::kilowatt;
    else if (*unit == "W") c.power_unit = Unit::watt;
    else throw ConfigError(fmt::format("'{}' must be \"kW\" or \"W\"", s.where("power_unit")));
  }
  int gap = static_cast<int>(c.max_gap.count());
  s.integer("max_gap_minutes", gap);
  c.max_gap = Minutes{gap};
  s.finish();
}

void read_bounds(Section s, ParameterBounds& b) {
  auto lo = b.lower.to_array();
  auto hi = b.upper.to_array();
  for (std::size_t i = 0; i < RcParameters::kCount; ++i) {
    s.range(std::string(RcParameters::kKeys[i]), lo[i], hi[i], false);
  }
  s.finish();
  b.lower = RcParameters::from_array(lo);
  b.upper = RcParameters::from_array(hi);
}

void read_calibration(Section s, CalibrationSettings& c) {
  s.integer("window_days", c.window_days);
  s.integer("population", c.ga.population);
  s.integer("generations", c.ga.generations);
  s.number("crossover_probability", c.ga.crossover_probability);
  s.number("crossover_eta", c.ga.crossover_eta);
  s.number("mutation_probability", c.ga.mutation_probability);
  s.number("mutation_eta", c.ga.mutation_eta);
  s.integer("threads", c.ga.threads);
  if (s.has("thresholds")) {
    Section t = s.child("thresholds");
    t.number("abs_temp_c", c.thresholds.abs_temp_c);
    t.number("rel_temp_percent", c.thresholds.rel_temp_percent);
    t.number("rel_power_percent", c.thresholds.rel_power_percent);
    t.finish();
  }
  s.finish();
}

void read_optimization(Section s, OptimizationSpec& o) {
  s.number("comfort_temp", o.comfort_temp);
  s.clock("comfort_start", o.comfort_start);
  s.clock("comfort_end", o.comfort_end);
  if (s.has("variables")) {
    Section v = s.child("variables");
    v.boolean("day_start", o.space.day_start);
    v.boolean("night_setpoint", o.space.night_setpoint);
    v.boolean("night_start", o.space.night_start);
    v.finish();
  }
  s.range("day_start_bounds", o.bounds.day_start_min, o.bounds.day_start_max, true);
  s.range("night_start_bounds", o.bounds.night_start_min, o.bounds.night_start_max, true);
  s.range("night_setpoint_bounds", o.bounds.night_setpoint_min, o.bounds.night_setpoint_max, false);
  s.integer("multistarts", o.multistart_count);
  s.number("initial_mesh", o.mads.initial_mesh);
  s.number("min_mesh", o.mads.min_mesh);
  s.integer("max_evaluations", o.mads.max_evaluations);
  s.integer("threads", o.threads);
  s.finish();
}

}  // namespace

ColumnSpec default_columns() {
  ColumnSpec c;
  c.columns = {{Role::power, "power_kw"},
               {Role::indoor_temp, "indoor_temp"},
               {Role::external_temp, "external_temp"},
               {Role::solar_irradiance, "solar_irradiance"},
               {Role::occupancy, "occupancy"},
               {Role::ventilation, "ventilation"}};
  return c;
}

ProjectConfig parse_config(const json& j, const std::filesystem::path& base_dir, std::optional<Mode> mode_override) {
  Section root(j, "");
  ProjectConfig cfg;
  cfg.columns = default_columns();

  if (root.has("building")) read_building(root.child("building"), cfg.building);
  if (mode_override) cfg.building.mode = *mode_override;
  cfg.building.validate();

  cfg.optimization = OptimizationSpec::defaults(cfg.building.mode);
  cfg.savings_window = SavingsWindow::defaults(cfg.building.mode);

  if (root.has("columns")) read_columns(root.child("columns"), cfg.columns);
  if (root.has("schedule") && root.has("schedule_file")) {
    throw ConfigError("give either 'schedule' or 'schedule_file', not both");
  }
  if (root.has("schedule")) cfg.schedule = parse_weekly_template(root.raw("schedule"), "schedule");
  if (auto file = root.string("schedule_file")) {
    const std::filesystem::path p = base_dir / *file;  // an absolute file replaces base_dir
    cfg.schedule = load_weekly_template(p);
  }
  if (root.has("bounds")) read_bounds(root.child("bounds"), cfg.bounds);
  cfg.bounds.validate();
  if (root.has("calibration")) read_calibration(root.child("calibration"), cfg.calibration);
  cfg.calibration.ga.validate();
  if (root.has("optimization")) read_optimization(root.child("optimization"), cfg.optimization);
  cfg.optimization.mode = cfg.building.mode;
  cfg.optimization.validate();
  if (root.has("model")) {
    Section m = root.child("model");
    m.integer("substeps", cfg.calibration.model.substeps);
    m.finish();
    if (cfg.calibration.model.substeps < 1) throw ConfigError("'model.substeps' must be at least 1");
  }
  if (root.has("savings_window")) {
    Section w = root.child("savings_window");
    w.clock("start", cfg.savings_window.start);
    w.clock("end", cfg.savings_window.end);
    w.finish();
  }
  cfg.savings_window.validate();
  if (root.has("align")) {
    Section a = root.child("align");
    if (auto rule = a.string("dst_rule")) {
      if (*rule == "eu") cfg.align.dst_rule = DstRule::eu;
      else if (*rule == "none") cfg.align.dst_rule = DstRule::none;
      else throw ConfigError("'align.dst_rule' must be \"eu\" or \"none\"");
    }
    a.finish();
  }
  root.finish();
  return cfg;
}

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

ProjectConfig load_config(const std::filesystem::path& path, std::optional<Mode> mode_override) {
  return parse_config(read_json_file(path), path.parent_path(), mode_override);
}

RcParameters parameters_from_json(const json& j, const std::string& context) {
  Section s(j, context);
  std::array<double, RcParameters::kCount> v{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string key(RcParameters::kKeys[i]);
    if (!j.contains(key)) throw ConfigError(fmt::format("missing key '{}'", s.where(key)));
    s.number(key, v[i]);
  }
  s.finish();
  RcParameters p = RcParameters::from_array(v);
  p.validate();
  return p;
}

json parameters_to_json(const RcParameters& p) {
  json j = json::object();
  const auto v = p.to_array();
  for (std::size_t i = 0; i < v.size(); ++i) j[std::string(RcParameters::kKeys[i])] = v[i];
  return j;
}

}  // namespace rcplan
