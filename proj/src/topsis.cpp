#include "rcplan/topsis.hpp"

#include <algorithm>
#include <cmath>

#include "rcplan/error.hpp"

namespace rcplan {

TopsisResult topsis_select(std::span<const ObjectiveVector> scores) {
  if (scores.empty()) throw InsufficientDataError("TOPSIS needs at least one candidate");
  const std::size_t n = scores.size();
  const std::size_t m = scores[0].size();

  std::vector<double> lo(m), hi(m);
  for (std::size_t j = 0; j < m; ++j) {
    lo[j] = hi[j] = scores[0][j];
    for (const auto& s : scores) {
      lo[j] = std::min(lo[j], s[j]);
      hi[j] = std::max(hi[j], s[j]);
    }
  }
  auto normalized = [&](std::size_t i, std::size_t j) {
    const double range = hi[j] - lo[j];
    return range > 0 ? (scores[i][j] - lo[j]) / range : 0.0;
  };

  // The ideals are the componentwise min / max of the normalized matrix.
  std::vector<double> best(m), worst(m);
  for (std::size_t j = 0; j < m; ++j) {
    best[j] = worst[j] = normalized(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      best[j] = std::min(best[j], normalized(i, j));
      worst[j] = std::max(worst[j], normalized(i, j));
    }
  }

  const double weight = 1.0 / static_cast<double>(m);
  TopsisResult result;
  result.closeness.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d_pos = 0, d_neg = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double v = weight * normalized(i, j);
      d_pos += std::pow(v - weight * best[j], 2);
      d_neg += std::pow(v - weight * worst[j], 2);
    }
    d_pos = std::sqrt(d_pos);
    d_neg = std::sqrt(d_neg);
    result.closeness[i] = (d_pos + d_neg) > 0 ? d_neg / (d_pos + d_neg) : 1.0;
  }

  auto better = [&](std::size_t a, std::size_t b) {
    if (result.closeness[a] != result.closeness[b]) return result.closeness[a] > result.closeness[b];
    for (std::size_t j = m; j-- > 0;) {
      if (scores[a][j] != scores[b][j]) return scores[a][j] < scores[b][j];
    }
    return a < b;
  };
  for (std::size_t i = 1; i < n; ++i) {
    if (better(i, result.index)) result.index = i;
  }
  return result;
}

}  // namespace rcplan
