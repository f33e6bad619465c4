#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dsab/enumeration.hpp"
#include "dsab/moea.hpp"

namespace dsab {

// Oracle points are matched by objective value, not by configuration:
// distinct mirror configurations share one front point.
inline constexpr double kHitRelTol = 1e-9;

bool objectives_match(double a1, double a2, double b1, double b2,
                      double rel_tol = kHitRelTol);

// Success-rate summary of n_runs independent seeded trials against an
// exhaustive-front oracle.
struct BenchmarkReport {
  std::string algorithm;
  int population = 0;
  int iterations = 0;
  int n_runs = 0;
  double p_mut = 0.0;
  double ce = 0.0;  // population * iterations * n_runs / space size
  std::vector<std::vector<bool>> hit_matrix;  // n_runs x front size
  std::vector<int> hits;                      // per oracle point

  std::vector<double> success_rates() const;
};

using Runner = std::function<RunResult(std::uint64_t seed)>;

// Runs the configured MOEA n_runs times with seeds cfg.seed + 1 ..
// cfg.seed + n_runs. A run hits oracle point k when any returned objective
// pair matches it within kHitRelTol. Throws std::invalid_argument when the
// oracle does not belong to the given problem.
BenchmarkReport run_benchmark(const MoeaConfig& cfg, const Problem& problem,
                              int n_runs, const ParetoFront& oracle,
                              std::uint64_t space_size, unsigned jobs = 1);

// Same bookkeeping for an arbitrary runner (e.g. replaying the exhaustive
// search itself as an ideal algorithm).
BenchmarkReport run_benchmark_with_runner(
    const Runner& runner, const std::string& algorithm, int population,
    int iterations, double p_mut, int n_runs, std::uint64_t base_seed,
    const ParetoFront& oracle, std::uint64_t space_size, unsigned jobs = 1);

// Rows: algorithm, population, iterations, runs, p_mut, CE, SR(1..K); SR as
// "hits/runs" rationals. Reports with differing front sizes are padded and
// flagged.
std::string benchmark_table_csv(const std::vector<BenchmarkReport>& reports);
std::string benchmark_table_text(const std::vector<BenchmarkReport>& reports);

}  // namespace dsab
