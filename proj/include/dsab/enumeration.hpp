#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dsab/metrics.hpp"
#include "dsab/model.hpp"

namespace dsab {

// Exact binomial coefficient C(P, n_dampers). Throws std::invalid_argument
// for n_dampers > P or negative arguments.
std::uint64_t count_configurations(int n_positions, int n_dampers);

// rank-th (0-based) configuration in lexicographic order.
DamperConfiguration combination_at(int n_positions, int n_dampers,
                                   std::uint64_t rank);

// Advances config to its lexicographic successor; false once exhausted.
bool next_combination(DamperConfiguration& config, int n_positions);

template <typename Fn>
void for_each_combination(int n_positions, int n_dampers, Fn&& fn) {
  DamperConfiguration config = combination_at(n_positions, n_dampers, 0);
  if (n_dampers == 0) {
    fn(config);
    return;
  }
  do {
    fn(config);
  } while (next_combination(config, n_positions));
}

// Every configuration of the study space with its objective pair, in
// lexicographic configuration order.
struct SolutionSpace {
  ObjectiveSet set = ObjectiveSet::LrDisp;
  int n_floors = 0;
  int n_dampers = 0;
  std::vector<std::pair<DamperConfiguration, ObjectiveVector>> entries;
};

// One nondominated objective point and every configuration achieving it
// (exact binary objective equality merges ties, e.g. mirror pairs).
struct ParetoPoint {
  ObjectiveVector objectives;
  std::vector<DamperConfiguration> configs;
};

// Points sorted by ascending f1; configs within a point sorted
// lexicographically.
struct ParetoFront {
  std::vector<ParetoPoint> points;
};

// Nondominated subset under component-wise minimization. Throws
// std::invalid_argument on empty or non-finite input.
ParetoFront pareto_filter(
    const std::vector<std::pair<DamperConfiguration, ObjectiveVector>>& entries);

// True if a dominates-or-equals b (minimization).
bool dominates_or_equal(double a1, double a2, double b1, double b2);
// True if a strictly dominates b.
bool dominates(double a1, double a2, double b1, double b2);

struct ExhaustiveOptions {
  unsigned jobs = 1;
  std::size_t chunk_size = 1024;  // fixed so results never depend on jobs
};

struct ExhaustiveResult {
  SolutionSpace space;
  ParetoFront front;
  double wall_seconds = 0.0;
  double mean_eval_ms = 0.0;
};

// Evaluates every C(P, n_dampers) configuration (parallel over deterministic
// chunks) and extracts the exact Pareto front. Evaluation failures are
// rethrown with the offending configuration named.
ExhaustiveResult exhaustive_front(const Evaluator& evaluator, ObjectiveSet set,
                                  int n_dampers,
                                  const ExhaustiveOptions& options = {});

}  // namespace dsab
