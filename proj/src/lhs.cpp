#include "rcplan/lhs.hpp"

#include <algorithm>
#include <numeric>

#include "rcplan/error.hpp"
#include "rcplan/random.hpp"

namespace rcplan {

std::vector<std::vector<double>> latin_hypercube(const Box& box, std::size_t count, std::uint64_t seed) {
  box.validate();
  if (count == 0) throw ConfigError("sample count must be at least 1");
  Rng rng(seed);
  const std::size_t dim = box.dimension();
  std::vector<std::vector<double>> points(count, std::vector<double>(dim));
  std::vector<std::size_t> strata(count);
  for (std::size_t d = 0; d < dim; ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    // Fisher-Yates with our own index draw so the permutation is portable.
    for (std::size_t i = count; i > 1; --i) std::swap(strata[i - 1], strata[rng.index(i)]);
    const double width = (box.upper[d] - box.lower[d]) / static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double offset = (static_cast<double>(strata[k]) + rng.uniform()) * width;
      points[k][d] = std::min(box.lower[d] + offset, box.upper[d]);
    }
  }
  return points;
}

}  // namespace rcplan
