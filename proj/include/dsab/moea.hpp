#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dsab/metrics.hpp"
#include "dsab/model.hpp"
#include "dsab/rng.hpp"

namespace dsab {

enum class Algorithm { Nsga2, Mopso1, Mopso2 };

const char* to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& text);

// Objectives assigned to gene vectors that decode to an invalid (non
// strictly increasing) position sequence. Such individuals never reach the
// structural solver and never enter a returned front or repository.
inline constexpr double kPenaltyObjective = 1e12;

struct MoeaConfig {
  Algorithm algorithm = Algorithm::Nsga2;
  int population = 40;
  int iterations = 200;
  double p_c = 0.9;     // SBX crossover probability
  double eta_c = 15.0;  // SBX distribution index
  double p_mut = -1.0;  // < 0: 1/N_d for NSGA-II, 0.05 for MOPSO
  double eta_m = 7.0;   // polynomial-mutation distribution index
  double w = 0.4;       // PSO inertia
  double c1 = 2.0;      // PSO cognitive coefficient
  double c2 = 2.0;      // PSO social coefficient
  int repository_capacity = 100;
  int grid_divisions = 30;
  std::uint64_t seed = 1;

  void validate() const;
  double effective_p_mut(int n_dampers) const;
};

// The optimization problem seen by the algorithms: bounded real genes that
// decode to damper configurations; objectives must be thread-safe and
// consume no shared random state.
struct Problem {
  int n_positions = 0;
  int n_dampers = 0;
  ObjectiveSet set = ObjectiveSet::LrDisp;
  std::function<std::pair<double, double>(const DamperConfiguration&)> objectives;
};

// Box bounds of decision variable k (1-based): [k, P - N_d + k]. Genes are
// continuous; decode integerizes them.
std::pair<double, double> gene_bounds(int n_positions, int n_dampers, int k);

struct DecodeResult {
  DamperConfiguration config;  // empty when penalty
  bool penalty = false;
};

// Round half away from zero, clamp each slot to its own bounds, then demand
// a strictly increasing sequence; otherwise flag a penalty (no solver call).
DecodeResult decode_genes(const Eigen::VectorXd& genes, int n_positions);

// Simulated binary crossover with index eta_c, applied to every gene with
// probability p_c for the pair; children are clamped to the gene bounds.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sbx_crossover(
    const Eigen::VectorXd& a, const Eigen::VectorXd& b, int n_positions,
    double eta_c, double p_c, Rng& rng);

// Inverse-CDF sample of the bounded polynomial perturbation density
// 0.5*(eta_m+1)*(1-|delta|)^eta_m on [-1, 1], given u in [0, 1).
double polynomial_mutation_delta(double u, double eta_m);

// x + delta*(hi-lo), clamped to [lo, hi].
double polynomial_mutation(double x, double lo, double hi, double eta_m,
                           Rng& rng);

struct RunPoint {
  DamperConfiguration config;
  double f1 = 0.0;
  double f2 = 0.0;
};

struct RunResult {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint64_t n_fe = 0;  // population * iterations
  std::vector<RunPoint> points;  // deduplicated, sorted by (f1, f2, config)
};

// Bounded external archive of mutually nondominated points with an adaptive
// objective-space grid: leaders come from sparsely populated cells, evictions
// from the densest cell.
class Repository {
 public:
  struct Entry {
    Eigen::VectorXd genes;
    DamperConfiguration config;
    double f1 = 0.0;
    double f2 = 0.0;
  };

  Repository(int capacity, int grid_divisions);

  // False when the candidate is dominated by (or duplicates) a member;
  // members dominated by the candidate are removed. Eviction on overflow
  // picks a random member of the most crowded grid cell.
  bool insert(Entry entry, Rng& rng);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Roulette over grid cells weighted by 1/occupancy, then a uniform member
  // of the chosen cell.
  const Entry& select_leader(Rng& rng) const;

 private:
  std::vector<int> cell_of_each() const;

  int capacity_;
  int divisions_;
  std::vector<Entry> entries_;
};

// Per-generation observer for NSGA-II; receives the generation number and
// the current nondominated (rank-1, non-penalty) set.
using GenerationObserver =
    std::function<void(int generation, const std::vector<RunPoint>&)>;

RunResult nsga2_run(const MoeaConfig& cfg, const Problem& problem,
                    unsigned jobs = 1,
                    const GenerationObserver& observer = {});

RunResult mopso_run(const MoeaConfig& cfg, const Problem& problem,
                    unsigned jobs = 1);

RunResult run_moea(const MoeaConfig& cfg, const Problem& problem,
                   unsigned jobs = 1);

}  // namespace dsab
