#include "rcplan/mads.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "rcplan/error.hpp"

namespace rcplan {

void MadsSettings::validate() const {
  if (!(initial_mesh > 0 && initial_mesh <= max_mesh)) throw ConfigError("initial mesh must lie in (0, max_mesh]");
  if (!(min_mesh > 0)) throw ConfigError("minimum mesh must be positive");
}

std::string_view mads_status_name(MadsStatus status) {
  return status == MadsStatus::mesh_converged ? "mesh_converged" : "budget_exhausted";
}

namespace {

bool improves(const BlackboxValue& candidate, const BlackboxValue& incumbent) {
  if (candidate.failed) return false;
  if (incumbent.feasible()) return candidate.feasible() && candidate.objective < incumbent.objective;
  if (candidate.feasible()) return true;
  return candidate.constraint < incumbent.constraint;
}

}  // namespace

MadsResult mads_solve(const Blackbox& blackbox, std::span<const double> start, const Box& box,
                      const MadsSettings& settings) {
  box.validate();
  settings.validate();
  const std::size_t n = box.dimension();
  if (start.size() != n) throw ConfigError(fmt::format("start has {} coordinates, box has {}", start.size(), n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!(start[i] >= box.lower[i] && start[i] <= box.upper[i])) {
      throw ConfigError(fmt::format("start coordinate {} = {} lies outside [{}, {}]", i, start[i], box.lower[i],
                                    box.upper[i]));
    }
  }

  MadsResult result;
  std::map<std::vector<double>, BlackboxValue> cache;
  auto evaluate = [&](const std::vector<double>& x) {
    if (auto it = cache.find(x); it != cache.end()) return it->second;
    BlackboxValue v = blackbox(x);
    if (!std::isfinite(v.objective) || !std::isfinite(v.constraint)) v.failed = true;
    ++result.evaluations;
    cache.emplace(x, v);
    return v;
  };

  std::vector<double> incumbent(start.begin(), start.end());
  BlackboxValue value = evaluate(incumbent);
  double mesh = settings.initial_mesh;

  bool out_of_budget = false;
  while (!out_of_budget) {
    result.mesh_history.push_back(mesh);
    std::vector<double> best = incumbent;
    BlackboxValue best_value = value;
    bool success = false;
    for (std::size_t i = 0; i < n && !out_of_budget; ++i) {
      const double width = box.upper[i] - box.lower[i];
      if (!(width > 0)) continue;
      for (const double sign : {1.0, -1.0}) {
        std::vector<double> y = incumbent;
        y[i] = std::clamp(incumbent[i] + sign * mesh * width, box.lower[i], box.upper[i]);
        if (y[i] == incumbent[i]) continue;
        if (!cache.contains(y) && result.evaluations > settings.max_evaluations) {
          out_of_budget = true;
          break;
        }
        const BlackboxValue v = evaluate(y);
        if (improves(v, best_value)) {
          best = std::move(y);
          best_value = v;
          success = true;
        }
      }
    }
    if (success) {
      incumbent = std::move(best);
      value = best_value;
      mesh = std::min(mesh * 2.0, settings.max_mesh);
    } else if (!out_of_budget) {
      if (mesh < settings.min_mesh) break;
      mesh *= 0.5;
    }
  }

  result.status = out_of_budget ? MadsStatus::budget_exhausted : MadsStatus::mesh_converged;
  result.x = std::move(incumbent);
  result.value = value;
  result.feasible = value.feasible();
  return result;
}

}  // namespace rcplan
