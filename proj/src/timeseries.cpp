#include "rcplan/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rcplan/error.hpp"

namespace rcplan {

std::string_view unit_name(Unit unit) {
  switch (unit) {
    case Unit::watt: return "W";
    case Unit::kilowatt: return "kW";
    case Unit::celsius: return "degC";
    case Unit::watt_per_m2: return "W/m2";
    case Unit::dimensionless: return "-";
  }
  return "?";
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::power: return "power";
    case Role::indoor_temp: return "indoor_temp";
    case Role::external_temp: return "external_temp";
    case Role::solar_irradiance: return "solar_irradiance";
    case Role::occupancy: return "occupancy";
    case Role::ventilation: return "ventilation";
  }
  return "?";
}

// --- TimeSeries / ScheduleSeries -------------------------------------------

TimeSeries::TimeSeries(LocalTime origin, Minutes step, std::vector<double> values, Unit unit)
    : origin_(origin), step_(step), values_(std::move(values)), unit_(unit) {
  if (step_ <= Minutes{0}) throw InsufficientDataError("time series step must be positive");
  if (values_.empty()) throw InsufficientDataError("time series must hold at least one value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw IngestionError(fmt::format("non-finite value at index {}", i), 0);
    }
  }
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
  if (first + count > values_.size()) throw std::out_of_range("TimeSeries::slice out of range");
  return TimeSeries(time_at(first), step_,
                    std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                        values_.begin() + static_cast<std::ptrdiff_t>(first + count)),
                    unit_);
}

ScheduleSeries::ScheduleSeries(LocalTime origin, Minutes step, std::vector<double> values)
    : origin_(origin), step_(step), values_(std::move(values)) {
  if (step_ <= Minutes{0}) throw InsufficientDataError("schedule step must be positive");
  if (values_.empty()) throw InsufficientDataError("schedule must hold at least one value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0 && values_[i] != 1.0) {
      throw IngestionError(fmt::format("schedule value at index {} is not 0 or 1", i), 0);
    }
  }
}

ScheduleSeries ScheduleSeries::slice(std::size_t first, std::size_t count) const {
  if (first + count > values_.size()) throw std::out_of_range("ScheduleSeries::slice out of range");
  return ScheduleSeries(time_at(first), step_,
                        std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                            values_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

// --- InputBundle -----------------------------------------------------------

namespace {

template <typename F>
void for_each_member(const InputBundle& b, F&& f) {
  if (b.power) f(Role::power, b.power->origin(), b.power->step(), b.power->size());
  if (b.indoor_temp) f(Role::indoor_temp, b.indoor_temp->origin(), b.indoor_temp->step(), b.indoor_temp->size());
  if (b.external_temp) f(Role::external_temp, b.external_temp->origin(), b.external_temp->step(), b.external_temp->size());
  if (b.solar_irradiance) f(Role::solar_irradiance, b.solar_irradiance->origin(), b.solar_irradiance->step(), b.solar_irradiance->size());
  if (b.occupancy) f(Role::occupancy, b.occupancy->origin(), b.occupancy->step(), b.occupancy->size());
  if (b.ventilation) f(Role::ventilation, b.ventilation->origin(), b.ventilation->step(), b.ventilation->size());
}

}  // namespace

bool InputBundle::has(Role role) const {
  switch (role) {
    case Role::power: return power.has_value();
    case Role::indoor_temp: return indoor_temp.has_value();
    case Role::external_temp: return external_temp.has_value();
    case Role::solar_irradiance: return solar_irradiance.has_value();
    case Role::occupancy: return occupancy.has_value();
    case Role::ventilation: return ventilation.has_value();
  }
  return false;
}

bool InputBundle::is_aligned() const {
  bool any = false;
  bool ok = true;
  LocalTime origin0{};
  std::size_t len0 = 0;
  for_each_member(*this, [&](Role, LocalTime origin, Minutes step, std::size_t len) {
    if (!any) {
      origin0 = origin;
      len0 = len;
      any = true;
    }
    ok = ok && step == kGridStep && origin == origin0 && len == len0;
  });
  return any && ok;
}

std::size_t InputBundle::length() const {
  if (!is_aligned()) throw InsufficientDataError("bundle is empty or not aligned");
  std::size_t len = 0;
  for_each_member(*this, [&](Role, LocalTime, Minutes, std::size_t n) { len = n; });
  return len;
}

LocalTime InputBundle::origin() const {
  if (!is_aligned()) throw InsufficientDataError("bundle is empty or not aligned");
  LocalTime origin{};
  for_each_member(*this, [&](Role, LocalTime o, Minutes, std::size_t) { origin = o; });
  return origin;
}

void InputBundle::require(std::initializer_list<Role> roles) const {
  for (Role r : roles) {
    if (!has(r)) throw ConfigError(fmt::format("input series '{}' is required but was not provided", role_name(r)));
  }
}

InputBundle InputBundle::slice(std::size_t first, std::size_t count) const {
  InputBundle out;
  if (power) out.power = power->slice(first, count);
  if (indoor_temp) out.indoor_temp = indoor_temp->slice(first, count);
  if (external_temp) out.external_temp = external_temp->slice(first, count);
  if (solar_irradiance) out.solar_irradiance = solar_irradiance->slice(first, count);
  if (occupancy) out.occupancy = occupancy->slice(first, count);
  if (ventilation) out.ventilation = ventilation->slice(first, count);
  return out;
}

InputBundle merge(InputBundle a, const InputBundle& b) {
  auto take = [](auto& dst, const auto& src, Role role) {
    if (!src) return;
    if (dst) throw ConfigError(fmt::format("series '{}' provided by more than one input", role_name(role)));
    dst = src;
  };
  take(a.power, b.power, Role::power);
  take(a.indoor_temp, b.indoor_temp, Role::indoor_temp);
  take(a.external_temp, b.external_temp, Role::external_temp);
  take(a.solar_irradiance, b.solar_irradiance, Role::solar_irradiance);
  take(a.occupancy, b.occupancy, Role::occupancy);
  take(a.ventilation, b.ventilation, Role::ventilation);
  return a;
}

// --- CSV ingestion ---------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

bool is_schedule(Role r) { return r == Role::occupancy || r == Role::ventilation; }

Unit unit_for(Role r) {
  switch (r) {
    case Role::power: return Unit::watt;
    case Role::indoor_temp:
    case Role::external_temp: return Unit::celsius;
    case Role::solar_irradiance: return Unit::watt_per_m2;
    default: return Unit::dimensionless;
  }
}

struct Column {
  Role role;
  std::size_t index;
  std::vector<double> values;
};

}  // namespace

InputBundle parse_csv(std::istream& in, const ColumnSpec& spec, const std::string& source_name) {
  if (spec.columns.empty()) throw ConfigError("column specification maps no roles");
  if (spec.power_unit != Unit::kilowatt && spec.power_unit != Unit::watt) {
    throw ConfigError("power column unit must be kW or W");
  }

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw IngestionError(fmt::format("{}: empty file", source_name), 1);
  ++line_no;
  const auto header = split(line);

  std::vector<Column> columns;
  for (const auto& [role, name] : spec.columns) {
    std::size_t found = 0;
    std::size_t index = 0;
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (header[c] == name) {
        ++found;
        index = c;
      }
    }
    if (found == 0) {
      throw ConfigError(fmt::format("{}: column '{}' for '{}' not found in header", source_name, name, role_name(role)));
    }
    if (found > 1) throw ConfigError(fmt::format("{}: column '{}' appears more than once", source_name, name));
    for (const auto& other : columns) {
      if (other.index == index) {
        throw ConfigError(fmt::format("{}: column '{}' mapped to more than one role", source_name, name));
      }
    }
    columns.push_back(Column{role, index, {}});
  }

  const double power_scale = spec.power_unit == Unit::kilowatt ? 1000.0 : 1.0;
  std::vector<LocalTime> stamps;
  std::optional<Minutes> step;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    const auto stamp = parse_timestamp(cells[0]);
    if (!stamp) {
      throw IngestionError(fmt::format("{}: row {}: unparseable timestamp '{}'", source_name, line_no, cells[0]), line_no);
    }

    std::size_t fill = 0;
    if (!stamps.empty()) {
      const Minutes delta = *stamp - stamps.back();
      if (delta <= Minutes{0}) {
        throw IngestionError(fmt::format("{}: row {}: timestamps are not strictly increasing", source_name, line_no), line_no);
      }
      if (!step) step = delta;
      if (delta % *step != Minutes{0}) {
        throw IngestionError(fmt::format("{}: row {}: irregular sampling ({} min, native step {} min)", source_name,
                                         line_no, delta.count(), step->count()),
                             line_no);
      }
      fill = static_cast<std::size_t>(delta / *step) - 1;
      if (Minutes{static_cast<long>(fill) * step->count()} > spec.max_gap) {
        throw IngestionError(fmt::format("{}: row {}: gap of {} missing samples exceeds the {} min fill limit",
                                         source_name, line_no, fill, spec.max_gap.count()),
                             line_no);
      }
    }

    std::vector<double> row_values;
    row_values.reserve(columns.size());
    for (const auto& col : columns) {
      if (col.index >= cells.size() || cells[col.index].empty()) {
        throw IngestionError(fmt::format("{}: row {}: missing value for '{}'", source_name, line_no, role_name(col.role)), line_no);
      }
      const auto cell = cells[col.index];
      double v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw IngestionError(fmt::format("{}: row {}: invalid number '{}' for '{}'", source_name, line_no, cell, role_name(col.role)),
                             line_no);
      }
      if (is_schedule(col.role) && v != 0.0 && v != 1.0) {
        throw IngestionError(fmt::format("{}: row {}: schedule '{}' must be 0 or 1", source_name, line_no, role_name(col.role)),
                             line_no);
      }
      row_values.push_back(col.role == Role::power ? v * power_scale : v);
    }

    for (std::size_t k = 0; k < columns.size(); ++k) {
      auto& vals = columns[k].values;
      const double prev = vals.empty() ? row_values[k] : vals.back();
      for (std::size_t j = 1; j <= fill; ++j) {
        const double frac = static_cast<double>(j) / static_cast<double>(fill + 1);
        vals.push_back(is_schedule(columns[k].role) ? prev : prev + (row_values[k] - prev) * frac);
      }
      vals.push_back(row_values[k]);
    }
    for (std::size_t j = 1; j <= fill; ++j) stamps.push_back(stamps.back() + *step);
    stamps.push_back(*stamp);
  }

  if (stamps.empty()) throw IngestionError(fmt::format("{}: no data rows", source_name), line_no);
  const Minutes native = step.value_or(kGridStep);

  InputBundle out;
  for (auto& col : columns) {
    switch (col.role) {
      case Role::power: out.power.emplace(stamps.front(), native, std::move(col.values), Unit::watt); break;
      case Role::indoor_temp: out.indoor_temp.emplace(stamps.front(), native, std::move(col.values), unit_for(col.role)); break;
      case Role::external_temp: out.external_temp.emplace(stamps.front(), native, std::move(col.values), unit_for(col.role)); break;
      case Role::solar_irradiance: out.solar_irradiance.emplace(stamps.front(), native, std::move(col.values), unit_for(col.role)); break;
      case Role::occupancy: out.occupancy.emplace(stamps.front(), native, std::move(col.values)); break;
      case Role::ventilation: out.ventilation.emplace(stamps.front(), native, std::move(col.values)); break;
    }
  }
  return out;
}

InputBundle ingest_csv(const std::filesystem::path& path, const ColumnSpec& spec) {
  std::ifstream in(path);
  if (!in) throw IngestionError(fmt::format("cannot open '{}'", path.string()), 0);
  return parse_csv(in, spec, path.string());
}

// --- Resampling ------------------------------------------------------------

namespace {

std::size_t upsample_factor(Minutes from, Minutes to, std::size_t length) {
  if (to <= Minutes{0}) throw UnsupportedDownsamplingError("target step must be positive");
  if (to > from) {
    throw UnsupportedDownsamplingError(
        fmt::format("cannot downsample from {} min to {} min", from.count(), to.count()));
  }
  if (from % to != Minutes{0}) {
    throw UnsupportedDownsamplingError(
        fmt::format("target step {} min does not divide {} min", to.count(), from.count()));
  }
  if (length < 2) throw InsufficientDataError("resampling needs at least two samples");
  return static_cast<std::size_t>(from / to);
}

}  // namespace

TimeSeries resample_linear(const TimeSeries& series, Minutes target_step) {
  const std::size_t factor = upsample_factor(series.step(), target_step, series.size());
  const auto v = series.values();
  std::vector<double> out;
  out.reserve((v.size() - 1) * factor + 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    out.push_back(v[i]);
    for (std::size_t j = 1; j < factor; ++j) {
      const double frac = static_cast<double>(j) / static_cast<double>(factor);
      out.push_back(v[i] + (v[i + 1] - v[i]) * frac);
    }
  }
  out.push_back(v.back());
  return TimeSeries(series.origin(), target_step, std::move(out), series.unit());
}

ScheduleSeries resample_hold(const ScheduleSeries& series, Minutes target_step) {
  const std::size_t factor = upsample_factor(series.step(), target_step, series.size());
  const auto v = series.values();
  std::vector<double> out;
  out.reserve((v.size() - 1) * factor + 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out.insert(out.end(), factor, v[i]);
  out.push_back(v.back());
  return ScheduleSeries(series.origin(), target_step, std::move(out));
}

// --- Alignment -------------------------------------------------------------

std::vector<LocalTime> dst_transitions(DstRule rule, const TimeWindow& window) {
  std::vector<LocalTime> out;
  if (rule == DstRule::none) return out;
  using namespace std::chrono;
  const auto y0 = year_month_day{floor<days>(window.start)}.year();
  const auto y1 = year_month_day{floor<days>(window.end)}.year();
  for (auto y = y0; y <= y1; ++y) {
    // EU: last Sunday of March 02:00 -> 03:00, last Sunday of October 03:00 -> 02:00.
    const LocalTime spring = LocalTime{local_days{y / March / Sunday[last]}} + hours{2};
    const LocalTime autumn = LocalTime{local_days{y / October / Sunday[last]}} + hours{2};
    for (LocalTime t : {spring, autumn}) {
      if (t >= window.start && t < window.end) out.push_back(t);
    }
  }
  return out;
}

namespace {

void check_window(const TimeWindow& w) {
  if (w.end <= w.start) throw ConfigError("alignment window end must be after its start");
  if (w.duration() % kGridStep != Minutes{0}) throw ConfigError("alignment window must be a whole number of 15-minute steps");
}

// Returns the index of window.start in a 15-minute series, checking coverage.
std::size_t locate(Role role, LocalTime origin, std::size_t size, const TimeWindow& w) {
  const LocalTime last = origin + static_cast<int>(size - 1) * kGridStep;
  const LocalTime need_last = w.end - kGridStep;
  if (origin > w.start) {
    throw CoverageError(fmt::format("series '{}' starts at {}, missing span [{}, {})", role_name(role),
                                    format_timestamp(origin), format_timestamp(w.start), format_timestamp(origin)));
  }
  if (last < need_last) {
    throw CoverageError(fmt::format("series '{}' ends at {}, missing span ({}, {}]", role_name(role),
                                    format_timestamp(last), format_timestamp(last), format_timestamp(need_last)));
  }
  if ((w.start - origin) % kGridStep != Minutes{0}) {
    throw CoverageError(fmt::format("series '{}' is not on the window's 15-minute grid", role_name(role)));
  }
  return static_cast<std::size_t>((w.start - origin) / kGridStep);
}

TimeSeries align_measured(Role role, const TimeSeries& s, const TimeWindow& w) {
  const TimeSeries grid = s.step() == kGridStep ? s : resample_linear(s, kGridStep);
  const std::size_t first = locate(role, grid.origin(), grid.size(), w);
  return grid.slice(first, static_cast<std::size_t>(w.duration() / kGridStep));
}

ScheduleSeries align_schedule(Role role, const ScheduleSeries& s, const TimeWindow& w) {
  const ScheduleSeries grid = s.step() == kGridStep ? s : resample_hold(s, kGridStep);
  const std::size_t first = locate(role, grid.origin(), grid.size(), w);
  return grid.slice(first, static_cast<std::size_t>(w.duration() / kGridStep));
}

}  // namespace

InputBundle align(const InputBundle& bundle, const TimeWindow& window, const AlignOptions& options) {
  check_window(window);
  const auto transitions = dst_transitions(options.dst_rule, window);
  if (!transitions.empty()) {
    throw DaylightSavingError(fmt::format("window [{}, {}) contains a daylight-saving transition at {}",
                                          format_timestamp(window.start), format_timestamp(window.end),
                                          format_timestamp(transitions.front())));
  }
  InputBundle out;
  if (bundle.power) out.power = align_measured(Role::power, *bundle.power, window);
  if (bundle.indoor_temp) out.indoor_temp = align_measured(Role::indoor_temp, *bundle.indoor_temp, window);
  if (bundle.external_temp) out.external_temp = align_measured(Role::external_temp, *bundle.external_temp, window);
  if (bundle.solar_irradiance) {
    out.solar_irradiance = align_measured(Role::solar_irradiance, *bundle.solar_irradiance, window);
  }
  if (bundle.occupancy) out.occupancy = align_schedule(Role::occupancy, *bundle.occupancy, window);
  if (bundle.ventilation) out.ventilation = align_schedule(Role::ventilation, *bundle.ventilation, window);
  if (!out.is_aligned()) throw ConfigError("cannot align an empty bundle");
  return out;
}

TimeWindow window_of(const InputBundle& aligned) {
  const LocalTime origin = aligned.origin();
  return TimeWindow{origin, origin + static_cast<int>(aligned.length()) * kGridStep};
}

}  // namespace rcplan
