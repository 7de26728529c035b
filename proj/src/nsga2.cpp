#include "rcplan/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "rcplan/error.hpp"
#include "rcplan/parallel.hpp"
#include "rcplan/random.hpp"

namespace rcplan {

void Box::validate() const {
  if (lower.empty()) throw ConfigError("search box has no dimensions");
  if (lower.size() != upper.size()) throw ConfigError("search box bound sizes differ");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i]) {
      throw ConfigError(fmt::format("search box dimension {}: invalid bounds [{}, {}]", i, lower[i], upper[i]));
    }
  }
}

std::vector<double> Box::clamp(std::vector<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  return x;
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  bool strictly = false;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] > b[m]) return false;
    if (a[m] < b[m]) strictly = true;
  }
  return strictly;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const ObjectiveVector> scores) {
  const std::size_t n = scores.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);  // indices that i dominates
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(scores[p], scores[q])) {
        dominated_by[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(scores[q], scores[p])) {
        dominated_by[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current) {
      for (std::size_t q : dominated_by[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), inf);
    return distance;
  }
  const std::size_t objectives = front[0].size();
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < objectives; ++m) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return front[a][m] < front[b][m]; });
    const double range = front[order.back()][m] - front[order.front()][m];
    if (!(range > 0)) continue;
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      distance[order[k]] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / range;
    }
  }
  return distance;
}

std::vector<std::size_t> environmental_selection(std::span<const ObjectiveVector> scores, std::size_t count) {
  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  for (const auto& front : fast_nondominated_sort(scores)) {
    if (chosen.size() + front.size() <= count) {
      chosen.insert(chosen.end(), front.begin(), front.end());
      if (chosen.size() == count) break;
      continue;
    }
    std::vector<ObjectiveVector> members;
    members.reserve(front.size());
    for (std::size_t i : front) members.push_back(scores[i]);
    const auto dist = crowding_distance(members);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
    for (std::size_t k = 0; chosen.size() < count; ++k) chosen.push_back(front[order[k]]);
    break;
  }
  return chosen;
}

void Nsga2Settings::validate() const {
  if (population < 4 || population % 2 != 0) {
    throw ConfigError(fmt::format("population must be even and >= 4, got {}", population));
  }
  if (generations < 1) throw ConfigError("generations must be >= 1");
  if (!(crossover_probability >= 0 && crossover_probability <= 1)) throw ConfigError("crossover probability must lie in [0, 1]");
  if (!(mutation_probability <= 1)) throw ConfigError("mutation probability must not exceed 1");
  if (!(crossover_eta >= 0) || !(mutation_eta >= 0)) throw ConfigError("distribution indices must be >= 0");
}

namespace {

constexpr double kPenalty = 1e30;

struct Ranked {
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
};

Ranked rank_population(std::span<const Individual> pop) {
  std::vector<ObjectiveVector> scores;
  scores.reserve(pop.size());
  for (const auto& ind : pop) scores.push_back(ind.objectives);
  Ranked r{std::vector<std::size_t>(pop.size()), std::vector<double>(pop.size())};
  const auto fronts = fast_nondominated_sort(scores);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<ObjectiveVector> members;
    for (std::size_t i : fronts[f]) members.push_back(scores[i]);
    const auto dist = crowding_distance(members);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      r.rank[fronts[f][k]] = f;
      r.crowding[fronts[f][k]] = dist[k];
    }
  }
  return r;
}

std::size_t tournament(const Ranked& r, Rng& rng) {
  const std::size_t n = r.rank.size();
  const std::size_t a = rng.index(n);
  const std::size_t b = rng.index(n);
  if (r.rank[a] != r.rank[b]) return r.rank[a] < r.rank[b] ? a : b;
  if (r.crowding[a] != r.crowding[b]) return r.crowding[a] > r.crowding[b] ? a : b;
  return rng.uniform() < 0.5 ? a : b;
}

double sbx_spread(double r, double beta, double eta) {
  const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
  if (r <= 1.0 / alpha) return std::pow(r * alpha, 1.0 / (eta + 1.0));
  return std::pow(1.0 / (2.0 - r * alpha), 1.0 / (eta + 1.0));
}

void simulated_binary_crossover(std::vector<double>& c1, std::vector<double>& c2, const Box& box, double eta, Rng& rng) {
  for (std::size_t i = 0; i < c1.size(); ++i) {
    if (rng.uniform() > 0.5) continue;
    if (std::abs(c1[i] - c2[i]) <= 1e-14) continue;
    const double y1 = std::min(c1[i], c2[i]);
    const double y2 = std::max(c1[i], c2[i]);
    const double lo = box.lower[i];
    const double hi = box.upper[i];
    const double r = rng.uniform();
    double a = 0.5 * ((y1 + y2) - sbx_spread(r, 1.0 + 2.0 * (y1 - lo) / (y2 - y1), eta) * (y2 - y1));
    double b = 0.5 * ((y1 + y2) + sbx_spread(r, 1.0 + 2.0 * (hi - y2) / (y2 - y1), eta) * (y2 - y1));
    a = std::clamp(a, lo, hi);
    b = std::clamp(b, lo, hi);
    if (rng.uniform() <= 0.5) {
      c1[i] = b;
      c2[i] = a;
    } else {
      c1[i] = a;
      c2[i] = b;
    }
  }
}

void polynomial_mutation(std::vector<double>& x, const Box& box, double probability, double eta, Rng& rng) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (rng.uniform() > probability) continue;
    const double lo = box.lower[i];
    const double hi = box.upper[i];
    if (!(hi > lo)) continue;
    const double d1 = (x[i] - lo) / (hi - lo);
    const double d2 = (hi - x[i]) / (hi - lo);
    const double r = rng.uniform();
    const double power = 1.0 / (eta + 1.0);
    double dq = 0;
    if (r <= 0.5) {
      const double val = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, eta + 1.0);
      dq = std::pow(val, power) - 1.0;
    } else {
      const double val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d2, eta + 1.0);
      dq = 1.0 - std::pow(val, power);
    }
    x[i] = std::clamp(x[i] + dq * (hi - lo), lo, hi);
  }
}

void evaluate_all(std::span<Individual> pop, const Evaluator& evaluate, unsigned threads) {
  parallel_for(pop.size(), threads, [&](std::size_t i) {
    ObjectiveVector obj = evaluate(pop[i].genes);
    for (double& v : obj) {
      if (!std::isfinite(v) || v > kPenalty) v = kPenalty;
    }
    pop[i].objectives = std::move(obj);
  });
}

}  // namespace

std::vector<Individual> nsga2(const Evaluator& evaluate, const Box& box, const Nsga2Settings& settings,
                              std::uint64_t seed, const GenerationObserver& observer) {
  box.validate();
  settings.validate();
  const std::size_t n = settings.population;
  const std::size_t dim = box.dimension();
  const double pm = settings.mutation_probability < 0 ? 1.0 / static_cast<double>(dim) : settings.mutation_probability;
  Rng rng(seed);

  std::vector<Individual> pop(n);
  for (auto& ind : pop) {
    ind.genes.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) ind.genes[i] = rng.uniform(box.lower[i], box.upper[i]);
  }
  evaluate_all(pop, evaluate, settings.threads);
  if (observer) observer(0, pop);

  for (std::size_t gen = 1; gen <= settings.generations; ++gen) {
    const Ranked ranked = rank_population(pop);
    std::vector<Individual> offspring(n);
    for (std::size_t k = 0; k < n; k += 2) {
      std::vector<double> c1 = pop[tournament(ranked, rng)].genes;
      std::vector<double> c2 = pop[tournament(ranked, rng)].genes;
      if (rng.uniform() <= settings.crossover_probability) {
        simulated_binary_crossover(c1, c2, box, settings.crossover_eta, rng);
      }
      polynomial_mutation(c1, box, pm, settings.mutation_eta, rng);
      polynomial_mutation(c2, box, pm, settings.mutation_eta, rng);
      offspring[k].genes = std::move(c1);
      offspring[k + 1].genes = std::move(c2);
    }
    evaluate_all(offspring, evaluate, settings.threads);

    std::vector<Individual> combined = std::move(pop);
    combined.insert(combined.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
    std::vector<ObjectiveVector> scores;
    scores.reserve(combined.size());
    for (const auto& ind : combined) scores.push_back(ind.objectives);
    const auto keep = environmental_selection(scores, n);
    pop.clear();
    for (std::size_t i : keep) pop.push_back(std::move(combined[i]));
    if (observer) observer(gen, pop);
  }

  std::vector<ObjectiveVector> scores;
  for (const auto& ind : pop) scores.push_back(ind.objectives);
  const auto fronts = fast_nondominated_sort(scores);
  std::vector<Individual> front;
  for (std::size_t i : fronts.front()) front.push_back(pop[i]);
  return front;
}

}  // namespace rcplan
