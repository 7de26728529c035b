#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rcplan/nsga2.hpp"

namespace rcplan {

struct TopsisResult {
  std::size_t index = 0;
  std::vector<double> closeness;  ///< d- / (d+ + d-) per candidate
};

/**
 * Best-compromise choice among candidates whose objectives are all costs.
 *
 * Each objective is min-max normalized over the set (a zero range maps to 0),
 * weights are equal, the positive ideal is the componentwise minimum and the
 * negative ideal the componentwise maximum. The candidate with the largest
 * relative closeness wins; ties go to the lower last objective, then the
 * lower earlier objectives, then the lower index.
 */
TopsisResult topsis_select(std::span<const ObjectiveVector> scores);

}  // namespace rcplan
