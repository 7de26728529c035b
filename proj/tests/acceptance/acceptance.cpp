// Acceptance suite. Prints one PASS/FAIL line per criterion; an optional
// argument runs a single criterion. Exit status is non-zero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "rcplan/calibration.hpp"
#include "rcplan/evaluation.hpp"
#include "rcplan/nsga2.hpp"
#include "rcplan/random.hpp"
#include "rcplan/report.hpp"
#include "rcplan/scheduler.hpp"
#include "rcplan/thermal_model.hpp"
#include "rcplan/timeseries.hpp"
#include "synthetic.hpp"

using namespace rcplan;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1: published daily tables through the summary code

struct PrintedColumn {
  const char* name;
  std::vector<double> daily;
  double mean;
  double sd;
};

// Printed values are rounded to one decimal (or to integers).
constexpr double kTableTolerance = 0.05 + 1e-9;

void compare(Outcome& o, const std::string& table, const std::string& column, const ColumnSummary& s, double mean,
             double sd) {
  const bool ok_mean = std::abs(s.mean - mean) <= kTableTolerance;
  const bool ok_sd = std::abs(s.sd - sd) <= kTableTolerance;
  if (!ok_mean) o.require(false, fmt::format("{} {} mean {:.4f} vs printed {}", table, column, s.mean, mean));
  if (!ok_sd) o.require(false, fmt::format("{} {} S.D. {:.4f} vs printed {}", table, column, s.sd, sd));
}

void savings_table(Outcome& o, const std::string& table, const PrintedColumn& kwh, const PrintedColumn& pct) {
  std::vector<DailySavings> days;
  for (std::size_t i = 0; i < kwh.daily.size(); ++i) {
    days.push_back(DailySavings{{}, Savings{kwh.daily[i], pct.daily[i], 0}});
  }
  const SavingsReport r = period_summary(days);
  compare(o, table, kwh.name, r.kwh, kwh.mean, kwh.sd);
  compare(o, table, pct.name, r.percent, pct.mean, pct.sd);
}

void error_table(Outcome& o, const std::string& table, const PrintedColumn& kw, const PrintedColumn& pct,
                 const PrintedColumn& temp) {
  std::vector<DailyError> days;
  for (std::size_t i = 0; i < kw.daily.size(); ++i) days.push_back(DailyError{kw.daily[i], pct.daily[i], temp.daily[i]});
  const ErrorReport r = error_summary(std::vector<std::chrono::year_month_day>(days.size()), days);
  compare(o, table, kw.name, r.power_kw, kw.mean, kw.sd);
  compare(o, table, pct.name, r.power_percent, pct.mean, pct.sd);
  compare(o, table, temp.name, r.temp_percent, temp.mean, temp.sd);
}

Outcome criterion_1() {
  Outcome o;
  // Cooling season, 10 days.
  savings_table(o, "cooling savings",
                {"kWh", {971, 1235, 1640, 2033, 542, 906, 1418, 1952, 1418, 1508}, 1362.3, 441.9},
                {"%", {6.6, 10.2, 10.9, 11.1, 2.5, 3.6, 9.5, 10.2, 9.9, 11.6}, 8.6, 3.1});
  error_table(o, "cooling errors",
              {"kW", {38.75, 61.25, 37.75, 42.25, 37.75, 37.25, 43.75, 37.75, 45.5, 41}, 42.3, 6.8},
              {"%", {11, 21, 11, 9, 10, 8, 13, 11, 12, 16}, 12.2, 3.6},
              {"temp %", {2.6, 1.9, 2.3, 2.8, 3, 2.9, 0.9, 3.1, 2.6, 2.4}, 2.4, 0.6});
  // Heating season, 17 days.
  savings_table(o, "heating savings",
                {"kWh",
                 {2310, 1738, 2248, 1533, 1129, 397, 636, 1797, 714, 1062, 1290, 384, 1725, 813, 1179, 40, 1375},
                 1198.2,
                 631.8},
                {"%",
                 {20.1, 14.5, 17.3, 13.0, 9.7, 3.3, 4.4, 15.3, 6.0, 10.6, 13.1, 5.2, 19.6, 8.4, 16.5, 0.6, 20.3},
                 11.7,
                 6});
  error_table(o, "heating errors",
              {"kW",
               {221.7, 114.3, 154.6, 89, 125.4, 89, 143.2, 138.1, 67.1, 56.7, 37.7, 89, 72.5, 93, 56.8, 63.7, 57.6},
               98.2,
               45.3},
              {"%", {15.6, 7.9, 11.0, 7.2, 10.1, 6.4, 12.0, 9.6, 5.2, 4.6, 2.7, 12.2, 5.3, 12.3, 4.2, 5.6, 7.2}, 8.2, 3.5},
              {"temp %", {4.0, 2.7, 2.9, 1.3, 2.1, 2.5, 4.5, 3.2, 3.2, 1.1, 1.3, 0.8, 1.5, 1.1, 0.8, 3.9, 3.4}, 2.4, 1.2});
  if (o.pass) o.detail = "all 20 printed means and S.D.s reproduced within 0.05";
  return o;
}

// ---------------------------------------------------------------------------
// 2: parameter recovery on synthetic data

Outcome criterion_2() {
  Outcome o;
  const auto sigma = synth::reference_parameters();
  const auto building = synth::reference_building();
  const CalibrationSettings settings;  // 28 days, 80 x 150
  std::string info;
  for (const double noise : {0.0, 0.01}) {
    const auto t0 = std::chrono::steady_clock::now();
    const InputBundle history = synth::history(sigma, building, synth::default_origin(), 28, 2024, noise);
    const CalibrationResult r = calibrate(history, building, ParameterBounds::defaults(), settings, 12345);
    const double elapsed = seconds_since(t0);
    const AccuracyReport& a = r.accuracy;
    info += fmt::format("{}noise {:.0f}%: |dT| {:.4f} C, f1 {:.4f}%, P_error {:.3f}%, {:.1f} s", info.empty() ? "" : "; ",
                        100 * noise, a.median_abs_temp_error, a.relative_temp_error, a.relative_power_error, elapsed);
    o.require(a.pass, fmt::format("gate failed at {:.0f}% noise", 100 * noise));
    o.require(elapsed < 600, "runtime over 10 min");
  }
  o.detail = o.pass ? info : o.detail + " (" + info + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 3: optimizer against an exhaustive 1-minute search

Outcome criterion_3() {
  Outcome o;
  const auto sigma = synth::reference_parameters();
  const auto building = synth::reference_building();
  const auto t0 = std::chrono::steady_clock::now();
  double worst_obj = 0, worst_time = 0;
  std::string times;
  for (const std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const ForecastDay day = synth::next_day(sigma, building, seed);
    OptimizationSpec spec = OptimizationSpec::defaults(Mode::heating);
    spec.space = DecisionSpace{true, false, false};
    spec.seed = seed;

    double best = std::numeric_limits<double>::infinity();
    int best_t = -1;
    for (int t = static_cast<int>(spec.bounds.day_start_min); t <= spec.bounds.day_start_max; ++t) {
      const DecisionVector theta{static_cast<double>(t), std::nullopt, static_cast<double>(building.day_end)};
      const ScheduleEvaluation e = evaluate_schedule(theta, sigma, building, day, spec);
      if (!e.failed && e.constraint <= 0 && e.objective < best) {
        best = e.objective;
        best_t = t;
      }
    }
    if (best_t < 0) {
      o.require(false, fmt::format("seed {}: grid search found no feasible time", seed));
      continue;
    }
    const ScheduleSolution sol = optimize_schedule(sigma, building, day, spec);
    const double rel = std::abs(watt_steps_to_kwh(best) - sol.predicted_energy_kwh) / watt_steps_to_kwh(best);
    const double dt = std::abs(sol.theta.day_start - best_t);
    worst_obj = std::max(worst_obj, rel);
    worst_time = std::max(worst_time, dt);
    times += fmt::format("{}{}", times.empty() ? "" : " ", format_clock(best_t));
    o.require(sol.feasible, fmt::format("seed {}: solution infeasible", seed));
    o.require(rel <= 0.005, fmt::format("seed {}: objective off by {:.3f}%", seed, 100 * rel));
    o.require(dt <= 15, fmt::format("seed {}: time off by {} min", seed, dt));
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 120, "runtime over 2 min");
  if (o.pass) {
    o.detail = fmt::format("5 seeds (grid optima {}), worst objective gap {:.4f}%, worst time gap {} min, {:.1f} s",
                           times, 100 * worst_obj, worst_time, elapsed);
  }
  return o;
}

// ---------------------------------------------------------------------------
// 4: savings against a wasteful schedule

Outcome criterion_4() {
  Outcome o;
  const auto sigma = synth::reference_parameters();
  BuildingConfig wasteful = synth::reference_building();
  wasteful.day_start = 4 * 60;
  wasteful.night_setpoint = 20;
  const ForecastDay day = synth::next_day(sigma, wasteful, 4);
  OptimizationSpec spec = OptimizationSpec::defaults(Mode::heating);
  spec.seed = 12345;
  const ScheduleSolution sol = optimize_schedule(sigma, wasteful, day, spec);
  o.require(sol.feasible, "optimizer returned an infeasible schedule");

  const SimulationResult baseline = simulate(sigma, wasteful, day.inputs, day.initial);
  const SimulationResult optimized =
      simulate(sigma, wasteful, day.inputs, day.initial, to_schedule(wasteful, sol.theta));
  const Savings es = energy_savings(baseline.power, optimized.power, SavingsWindow::defaults(Mode::heating));
  o.require(es.kwh > 0, fmt::format("ES = {:.3f} kWh is not positive", es.kwh));

  // Comfort checked step by step on the stand-alone simulation.
  std::size_t checked = 0, violations = 0;
  for (std::size_t k = 0; k < optimized.indoor_temp.size(); ++k) {
    const int m = minute_of_day(optimized.indoor_temp.time_at(k));
    if (m < spec.comfort_start || m >= spec.comfort_end) continue;
    ++checked;
    if (optimized.indoor_temp[k] < spec.comfort_temp) ++violations;
  }
  o.require(checked == 48, fmt::format("{} comfort steps checked", checked));
  o.require(violations == 0, fmt::format("{} comfort-window steps below {} C", violations, spec.comfort_temp));

  const std::string plan = fmt::format("day {} night {} at {:.2f} C", format_clock(sol.theta.day_start),
                                       format_clock(sol.theta.night_start), sol.theta.night_setpoint.value_or(0));
  const std::string band = es.percent >= 5 && es.percent <= 20 ? "inside" : "outside";
  o.detail += fmt::format("{}ES {:.1f} kWh ({:.2f}%, {} the 5-20% band), {}", o.detail.empty() ? "" : "; ", es.kwh,
                          es.percent, band, plan);
  return o;
}

// ---------------------------------------------------------------------------
// 5: RK4 order on a problem with a closed-form solution

Outcome criterion_5() {
  Outcome o;
  // Air node coupled only to outdoor air: dT/dt = (T_e - T) / (R_f C_i).
  RcParameters p = synth::reference_parameters();
  const double tau = 1800;
  p.interior_convective_resistance = 1e30;
  p.wall_inner_resistance = 1e30;
  p.infiltration_resistance = 1.0;
  p.air_capacitance = tau;
  p.occupancy_gain = 0;
  p.solar_gain = 0;
  BuildingConfig c;
  c.p_min = 0;
  c.p_max = 0;

  std::vector<double> errors;
  for (int substeps : {1, 2, 4, 8}) {
    ThermalState s{30, 10};
    for (int k = 0; k < 8; ++k) s = step(p, c, s, StepInputs{10, 0, 0, 0, 0}, 0, 900, substeps).next;
    errors.push_back(std::abs(s.indoor - (10 + 20 * std::exp(-8 * 900 / tau))));
  }
  std::string ratios;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double r = errors[i - 1] / errors[i];
    ratios += fmt::format("{}{:.2f}", i > 1 ? ", " : "", r);
    o.require(r >= 14, fmt::format("halving {} ratio {:.2f}", i, r));
  }
  o.detail += fmt::format("{}error ratios {}", o.detail.empty() ? "" : "; ", ratios);
  return o;
}

// ---------------------------------------------------------------------------
// 6: NSGA-II against analytic and brute-force oracles

std::vector<std::vector<std::size_t>> brute_force_fronts(const std::vector<ObjectiveVector>& s) {
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<bool> removed(s.size(), false);
  std::size_t left = s.size();
  while (left > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (removed[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < s.size() && !dominated; ++j) {
        if (removed[j] || i == j) continue;
        bool no_worse = true, better = false;
        for (std::size_t m = 0; m < s[i].size(); ++m) {
          no_worse = no_worse && s[j][m] <= s[i][m];
          better = better || s[j][m] < s[i][m];
        }
        dominated = no_worse && better;
      }
      if (!dominated) front.push_back(i);
    }
    for (std::size_t i : front) removed[i] = true;
    left -= front.size();
    fronts.push_back(front);
  }
  return fronts;
}

double hypervolume_2d(std::vector<ObjectiveVector> pts, double r1, double r2) {
  std::sort(pts.begin(), pts.end());
  double hv = 0, floor2 = r2;
  for (const auto& p : pts) {
    if (p[0] >= r1 || p[1] >= floor2) continue;
    hv += (r1 - p[0]) * (floor2 - p[1]);
    floor2 = p[1];
  }
  return hv;
}

Outcome criterion_6() {
  Outcome o;
  // f1 = x^2, f2 = (x - 2)^2 on [-5, 5]; front is x in [0, 2].
  // Reference point (25, 49): HV = int_0^2 ... = 196 - 8/3 + 1029.
  const Evaluator f = [](std::span<const double> x) {
    return ObjectiveVector{x[0] * x[0], (x[0] - 2) * (x[0] - 2)};
  };
  Nsga2Settings s;
  s.population = 40;
  s.generations = 100;
  const auto front = nsga2(f, Box{{-5}, {5}}, s, 7);
  std::vector<ObjectiveVector> scores;
  for (const auto& ind : front) scores.push_back(ind.objectives);
  const double analytic = 196.0 - 8.0 / 3.0 + 1029.0;
  const double hv = hypervolume_2d(scores, 25, 49);
  const double gap = std::abs(hv - analytic) / analytic;
  o.require(gap <= 0.02, fmt::format("hypervolume {:.3f} vs {:.3f}", hv, analytic));

  Rng rng(606);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(200);
    const std::size_t m = 2 + rng.index(2);
    std::vector<ObjectiveVector> pop(n, ObjectiveVector(m));
    for (auto& v : pop) {
      for (double& x : v) x = std::floor(rng.uniform(0, 8));  // coarse values force ties
    }
    auto fast = fast_nondominated_sort(pop);
    auto brute = brute_force_fronts(pop);
    for (auto& fr : fast) std::sort(fr.begin(), fr.end());
    if (fast != brute) ++mismatches;
  }
  o.require(mismatches == 0, fmt::format("{} of 100 sorts disagree with brute force", mismatches));
  if (o.pass) o.detail = fmt::format("hypervolume gap {:.3f}%, 100/100 sorts match", 100 * gap);
  return o;
}

// ---------------------------------------------------------------------------
// 7: max-aggregated comfort constraint vs per-instant constraints

Outcome criterion_7() {
  Outcome o;
  const auto sigma = synth::reference_parameters();
  const auto building = synth::reference_building();
  const ForecastDay day = synth::next_day(sigma, building, 70);
  const OptimizationSpec spec = OptimizationSpec::defaults(Mode::heating);
  const auto& b = spec.bounds;
  Rng rng(77);
  int feasible = 0, disagreements = 0;
  for (int i = 0; i < 50; ++i) {
    const DecisionVector theta{rng.uniform(b.day_start_min, b.day_start_max),
                               rng.uniform(b.night_setpoint_min, b.night_setpoint_max),
                               rng.uniform(b.night_start_min, b.night_start_max)};
    const double g = constraint_comfort(theta, sigma, building, day, spec);
    const SimulationResult sim = simulate(sigma, building, day.inputs, day.initial, to_schedule(building, theta));
    bool every = true;
    for (std::size_t k = 0; k < sim.indoor_temp.size(); ++k) {
      const int m = minute_of_day(sim.indoor_temp.time_at(k));
      if (m >= spec.comfort_start && m < spec.comfort_end && spec.comfort_temp - sim.indoor_temp[k] > 0) every = false;
    }
    if ((g <= 0) != every) ++disagreements;
    feasible += every;
  }
  o.require(disagreements == 0, fmt::format("{} of 50 verdicts differ", disagreements));
  if (o.pass) o.detail = fmt::format("50/50 verdicts agree ({} feasible, {} infeasible)", feasible, 50 - feasible);
  return o;
}

// ---------------------------------------------------------------------------
// 8: determinism of every stage

struct StageOutputs {
  std::string ingest;
  std::string simulation;
  std::string calibration;
  std::string pareto;
  std::string solution;
  std::string savings;
};

std::string bundle_text(const InputBundle& b) {
  std::string out;
  for (std::size_t k = 0; k < b.length(); ++k) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", format_timestamp(b.power->time_at(k)), (*b.power)[k],
                       (*b.indoor_temp)[k], (*b.external_temp)[k], (*b.solar_irradiance)[k]);
  }
  return out;
}

StageOutputs run_pipeline(unsigned threads) {
  const auto sigma = synth::reference_parameters();
  const auto building = synth::reference_building();
  StageOutputs out;

  // Ingestion: a CSV with hourly weather, resampled and aligned.
  const InputBundle truth = synth::history(sigma, building, synth::default_origin(), 7, 88);
  std::ostringstream csv;
  csv << "timestamp,power_kw,indoor_temp,external_temp,solar_irradiance,occupancy,ventilation\n";
  for (std::size_t k = 0; k < truth.length(); ++k) {
    csv << format_timestamp(truth.power->time_at(k))
        << fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", (*truth.power)[k] / 1000,
                       (*truth.indoor_temp)[k], (*truth.external_temp)[k], (*truth.solar_irradiance)[k],
                       (*truth.occupancy)[k], (*truth.ventilation)[k]);
  }
  std::istringstream in(csv.str());
  ColumnSpec spec;
  spec.columns = {{Role::power, "power_kw"},         {Role::indoor_temp, "indoor_temp"},
                  {Role::external_temp, "external_temp"}, {Role::solar_irradiance, "solar_irradiance"},
                  {Role::occupancy, "occupancy"},    {Role::ventilation, "ventilation"}};
  const InputBundle raw = parse_csv(in, spec, "determinism.csv");
  const InputBundle history = align(raw, window_of(truth), AlignOptions{});
  out.ingest = bundle_text(history);

  out.simulation = simulation_csv(simulate(sigma, building, history, initial_state_from_history(history)));

  CalibrationSettings cal;
  cal.window_days = 7;
  cal.ga.population = 40;
  cal.ga.generations = 30;
  cal.ga.threads = threads;
  const CalibrationResult r = calibrate(history, building, ParameterBounds::defaults(), cal, 12345);
  out.calibration = calibration_report_json(r).dump(2);
  out.pareto = pareto_csv(r.front, r.selected_index);

  const ForecastDay day = synth::next_day(sigma, building, 88);
  OptimizationSpec opt = OptimizationSpec::defaults(Mode::heating);
  opt.seed = 12345;
  opt.threads = threads;
  opt.multistart_count = 8;
  const ScheduleSolution sol = optimize_schedule(r.selected.params, building, day, opt);
  out.solution = solution_json(sol, opt).dump(2);

  const auto base = simulate(r.selected.params, building, day.inputs, day.initial);
  const auto planned =
      simulate(r.selected.params, building, day.inputs, day.initial, to_schedule(building, sol.theta));
  out.savings =
      savings_csv(period_summary(daily_savings(base.power, planned.power, SavingsWindow::defaults(Mode::heating))));
  return out;
}

Outcome criterion_8() {
  Outcome o;
  const StageOutputs a = run_pipeline(1);
  const StageOutputs b = run_pipeline(1);
  const StageOutputs c = run_pipeline(4);
  auto same = [&](const char* stage, const std::string StageOutputs::*field) {
    o.require(a.*field == b.*field, fmt::format("{} differs between runs", stage));
    o.require(a.*field == c.*field, fmt::format("{} differs with 4 threads", stage));
  };
  same("ingestion", &StageOutputs::ingest);
  same("simulation", &StageOutputs::simulation);
  same("calibration report", &StageOutputs::calibration);
  same("pareto front", &StageOutputs::pareto);
  same("schedule solution", &StageOutputs::solution);
  same("savings", &StageOutputs::savings);
  if (o.pass) o.detail = "6 stages byte-identical across 2 serial runs and a 4-thread run";
  return o;
}

const std::vector<std::function<Outcome()>> kCriteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                      criterion_5, criterion_6, criterion_7, criterion_8};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> which;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::cerr << "usage: acceptance [1-" << kCriteria.size() << "]\n";
      return 2;
    }
    which.push_back(static_cast<std::size_t>(n));
  } else {
    for (std::size_t i = 1; i <= kCriteria.size(); ++i) which.push_back(i);
  }

  int failures = 0;
  for (std::size_t n : which) {
    Outcome r;
    try {
      r = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      r = Outcome{false, std::string("exception: ") + e.what()};
    }
    std::cout << fmt::format("[{}] criterion {}: {}\n", r.pass ? "PASS" : "FAIL", n, r.detail) << std::flush;
    failures += !r.pass;
  }
  return failures == 0 ? 0 : 1;
}
