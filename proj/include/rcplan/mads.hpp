#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "rcplan/nsga2.hpp"

namespace rcplan {

/// One blackbox answer. A point is feasible when it did not fail and its
/// constraint value is <= 0.
struct BlackboxValue {
  double objective = 0;
  double constraint = 0;
  bool failed = false;

  bool feasible() const { return !failed && constraint <= 0; }
};

using Blackbox = std::function<BlackboxValue(std::span<const double>)>;

struct MadsSettings {
  /// Mesh sizes are fractions of each box width.
  double initial_mesh = 0.125;
  /// Polling stops after an unsuccessful poll at a mesh below this size.
  double min_mesh = 1e-3;
  double max_mesh = 1.0;
  /// Blackbox calls allowed after the start point.
  std::size_t max_evaluations = 500;

  void validate() const;
};

enum class MadsStatus { mesh_converged, budget_exhausted };

std::string_view mads_status_name(MadsStatus status);

struct MadsResult {
  /// Best feasible point, or the least-violating one when none was found.
  std::vector<double> x;
  BlackboxValue value;
  bool feasible = false;
  /// Blackbox calls including the start point. Repeated points are served
  /// from a cache and not counted.
  std::size_t evaluations = 0;
  std::vector<double> mesh_history;
  MadsStatus status = MadsStatus::mesh_converged;
};

/**
 * Coordinate-poll mesh search on a box. Each iteration evaluates the 2n points
 * incumbent +/- mesh * width along every axis (clamped to the box) and moves
 * to the best improving one; the mesh doubles on success and halves on
 * failure.
 *
 * While no feasible point is known, improvement means a lower constraint
 * value. Once one is, infeasible points are rejected outright and
 * improvement means a lower objective among feasible points.
 */
MadsResult mads_solve(const Blackbox& blackbox, std::span<const double> start, const Box& box,
                      const MadsSettings& settings = {});

}  // namespace rcplan
