#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rcplan {

/// Objective values of one candidate; every objective is minimized.
using ObjectiveVector = std::vector<double>;

/// Box constraints for real-coded search.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const { return lower.size(); }
  /// Throws ConfigError on size mismatch, empty box or lower > upper.
  void validate() const;
  std::vector<double> clamp(std::vector<double> x) const;
};

/// True when `a` is no worse than `b` everywhere and strictly better somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

/**
 * Partitions candidates into non-domination levels (Deb's fast sort).
 * Front 0 is the non-dominated set; indices inside a front are ascending.
 */
std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const ObjectiveVector> scores);

/**
 * Crowding distance of each member of one front. Extremes of each objective
 * get +inf; an objective whose range over the front is zero adds nothing.
 */
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

/**
 * Elitist truncation: keeps `count` indices of `scores`, filling whole fronts
 * and breaking the last one by decreasing crowding distance (lower index
 * first on ties).
 */
std::vector<std::size_t> environmental_selection(std::span<const ObjectiveVector> scores, std::size_t count);

struct Nsga2Settings {
  std::size_t population = 80;
  std::size_t generations = 150;
  double crossover_probability = 0.9;
  double crossover_eta = 15.0;
  /// Per-gene mutation probability; a negative value means 1 / dimension.
  double mutation_probability = -1.0;
  double mutation_eta = 20.0;
  /// Evaluation workers (0 = hardware concurrency). Results never depend on it.
  unsigned threads = 1;

  void validate() const;
};

struct Individual {
  std::vector<double> genes;
  ObjectiveVector objectives;
};

/// Must be pure and thread-safe: it may be called concurrently.
using Evaluator = std::function<ObjectiveVector(std::span<const double>)>;
using GenerationObserver = std::function<void(std::size_t generation, std::span<const Individual> population)>;

/**
 * Real-coded NSGA-II: binary crowded tournament, simulated binary crossover
 * and polynomial mutation (both bounded), and (mu + lambda) elitist
 * survival. Returns the non-dominated members of the final population.
 * Identical seeds give identical results.
 */
std::vector<Individual> nsga2(const Evaluator& evaluate, const Box& box, const Nsga2Settings& settings,
                              std::uint64_t seed, const GenerationObserver& observer = {});

}  // namespace rcplan
