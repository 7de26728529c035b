#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rcplan/nsga2.hpp"

namespace rcplan {

/**
 * Latin hypercube design of `count` points in `box`. Each dimension is cut
 * into `count` equal strata; every stratum receives exactly one point, placed
 * uniformly inside it, and the strata are paired across dimensions by an
 * independent random permutation per dimension.
 */
std::vector<std::vector<double>> latin_hypercube(const Box& box, std::size_t count, std::uint64_t seed);

}  // namespace rcplan
