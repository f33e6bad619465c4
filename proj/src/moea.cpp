#include "dsab/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "dsab/enumeration.hpp"
#include "dsab/parallel.hpp"

namespace dsab {

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Nsga2:
      return "nsga2";
    case Algorithm::Mopso1:
      return "mopso1";
    case Algorithm::Mopso2:
      return "mopso2";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& text) {
  if (text == "nsga2") return Algorithm::Nsga2;
  if (text == "mopso1") return Algorithm::Mopso1;
  if (text == "mopso2") return Algorithm::Mopso2;
  throw std::invalid_argument("unknown algorithm '" + text +
                              "' (expected nsga2, mopso1 or mopso2)");
}

void MoeaConfig::validate() const {
  if (population < 2) throw std::invalid_argument("moea: population must be >= 2");
  if (iterations < 0) throw std::invalid_argument("moea: iterations must be >= 0");
  if (p_c < 0.0 || p_c > 1.0)
    throw std::invalid_argument("moea: p_c must lie in [0, 1]");
  if (p_mut > 1.0)
    throw std::invalid_argument("moea: p_mut must lie in [0, 1]");
  if (eta_c < 0.0 || eta_m < 0.0)
    throw std::invalid_argument("moea: distribution indices must be >= 0");
  if (repository_capacity < 1 || grid_divisions < 1)
    throw std::invalid_argument("moea: repository settings must be positive");
}

double MoeaConfig::effective_p_mut(int n_dampers) const {
  if (p_mut >= 0.0) return p_mut;
  return algorithm == Algorithm::Nsga2 ? 1.0 / n_dampers : 0.05;
}

std::pair<double, double> gene_bounds(int n_positions, int n_dampers, int k) {
  if (k < 1 || k > n_dampers)
    throw std::invalid_argument("gene_bounds: slot index out of range");
  return {static_cast<double>(k),
          static_cast<double>(n_positions - n_dampers + k)};
}

DecodeResult decode_genes(const Eigen::VectorXd& genes, int n_positions) {
  const int n_dampers = static_cast<int>(genes.size());
  DecodeResult result;
  result.config.reserve(static_cast<std::size_t>(n_dampers));
  int prev = 0;
  for (int k = 1; k <= n_dampers; ++k) {
    const auto [lo, hi] = gene_bounds(n_positions, n_dampers, k);
    auto value = static_cast<int>(std::llround(genes[k - 1]));
    value = std::clamp(value, static_cast<int>(lo), static_cast<int>(hi));
    if (value <= prev) {
      result.config.clear();
      result.penalty = true;
      return result;
    }
    result.config.push_back(value);
    prev = value;
  }
  return result;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sbx_crossover(
    const Eigen::VectorXd& a, const Eigen::VectorXd& b, int n_positions,
    double eta_c, double p_c, Rng& rng) {
  if (a.size() != b.size())
    throw std::invalid_argument("sbx_crossover: parent lengths differ");
  Eigen::VectorXd c1 = a;
  Eigen::VectorXd c2 = b;
  if (rng.uniform01() >= p_c) return {c1, c2};
  const int n_dampers = static_cast<int>(a.size());
  for (int k = 1; k <= n_dampers; ++k) {
    const double u = rng.uniform01();
    const double spread =
        u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta_c + 1.0))
                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta_c + 1.0));
    const double pa = a[k - 1];
    const double pb = b[k - 1];
    const auto [lo, hi] = gene_bounds(n_positions, n_dampers, k);
    c1[k - 1] = std::clamp(0.5 * ((1.0 + spread) * pa + (1.0 - spread) * pb), lo, hi);
    c2[k - 1] = std::clamp(0.5 * ((1.0 - spread) * pa + (1.0 + spread) * pb), lo, hi);
  }
  return {c1, c2};
}

double polynomial_mutation_delta(double u, double eta_m) {
  if (u < 0.5) return std::pow(2.0 * u, 1.0 / (eta_m + 1.0)) - 1.0;
  return 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta_m + 1.0));
}

double polynomial_mutation(double x, double lo, double hi, double eta_m,
                           Rng& rng) {
  const double delta = polynomial_mutation_delta(rng.uniform01(), eta_m);
  return std::clamp(x + delta * (hi - lo), lo, hi);
}

namespace {

struct Evaluated {
  Eigen::VectorXd genes;
  DamperConfiguration config;
  bool penalty = false;
  double f1 = kPenaltyObjective;
  double f2 = kPenaltyObjective;
};

void evaluate_genes(const Problem& problem, Evaluated& individual) {
  DecodeResult decoded = decode_genes(individual.genes, problem.n_positions);
  individual.penalty = decoded.penalty;
  if (decoded.penalty) {
    individual.config.clear();
    individual.f1 = kPenaltyObjective;
    individual.f2 = kPenaltyObjective;
    return;
  }
  individual.config = std::move(decoded.config);
  const auto [f1, f2] = problem.objectives(individual.config);
  individual.f1 = f1;
  individual.f2 = f2;
}

template <typename Pop>
void evaluate_population(const Problem& problem, Pop& pop, unsigned jobs) {
  parallel_chunks(pop.size(), 16, jobs,
                  [&](std::size_t a, std::size_t b, std::size_t) {
                    for (std::size_t i = a; i < b; ++i)
                      evaluate_genes(problem, pop[i]);
                  });
}

Eigen::VectorXd random_genes(const Problem& problem, Rng& rng) {
  Eigen::VectorXd genes(problem.n_dampers);
  for (int k = 1; k <= problem.n_dampers; ++k) {
    const auto [lo, hi] = gene_bounds(problem.n_positions, problem.n_dampers, k);
    genes[k - 1] = rng.uniform(lo, hi);
  }
  return genes;
}

std::vector<RunPoint> collect_points(const std::vector<const Evaluated*>& set) {
  std::map<DamperConfiguration, RunPoint> unique;
  for (const Evaluated* e : set) {
    if (e->penalty) continue;
    unique.emplace(e->config, RunPoint{e->config, e->f1, e->f2});
  }
  std::vector<RunPoint> points;
  points.reserve(unique.size());
  for (auto& [config, point] : unique) points.push_back(std::move(point));
  std::sort(points.begin(), points.end(), [](const RunPoint& a, const RunPoint& b) {
    if (a.f1 != b.f1) return a.f1 < b.f1;
    if (a.f2 != b.f2) return a.f2 < b.f2;
    return a.config < b.config;
  });
  return points;
}

// ---- NSGA-II ----------------------------------------------------------

struct RankedIndividual : Evaluated {
  int rank = 0;
  double crowding = 0.0;
};

// Deb's fast nondominated sort; returns fronts as index lists and writes
// ranks into the population.
std::vector<std::vector<int>> fast_nondominated_sort(
    std::vector<RankedIndividual>& pop) {
  const int n = static_cast<int>(pop.size());
  std::vector<std::vector<int>> dominated_by(n);
  std::vector<int> domination_count(n, 0);
  std::vector<std::vector<int>> fronts(1);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(pop[p].f1, pop[p].f2, pop[q].f1, pop[q].f2))
        dominated_by[p].push_back(q);
      else if (dominates(pop[q].f1, pop[q].f2, pop[p].f1, pop[p].f2))
        ++domination_count[p];
    }
    if (domination_count[p] == 0) {
      pop[p].rank = 0;
      fronts[0].push_back(p);
    }
  }
  int i = 0;
  while (!fronts[static_cast<std::size_t>(i)].empty()) {
    std::vector<int> next;
    for (const int p : fronts[static_cast<std::size_t>(i)]) {
      for (const int q : dominated_by[p]) {
        if (--domination_count[q] == 0) {
          pop[q].rank = i + 1;
          next.push_back(q);
        }
      }
    }
    ++i;
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

void assign_crowding(std::vector<RankedIndividual>& pop,
                     const std::vector<int>& front) {
  const auto size = front.size();
  for (const int i : front) pop[i].crowding = 0.0;
  if (size <= 2) {
    for (const int i : front)
      pop[i].crowding = std::numeric_limits<double>::infinity();
    return;
  }
  for (const int objective : {0, 1}) {
    auto value = [&](int i) {
      return objective == 0 ? pop[i].f1 : pop[i].f2;
    };
    std::vector<int> order(front);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return value(a) < value(b); });
    const double span = value(order.back()) - value(order.front());
    pop[order.front()].crowding = std::numeric_limits<double>::infinity();
    pop[order.back()].crowding = std::numeric_limits<double>::infinity();
    if (span <= 0.0) continue;
    for (std::size_t j = 1; j + 1 < order.size(); ++j)
      pop[order[j]].crowding +=
          (value(order[j + 1]) - value(order[j - 1])) / span;
  }
}

int tournament_pick(const std::vector<RankedIndividual>& pop, Rng& rng) {
  const auto n = static_cast<std::int64_t>(pop.size());
  const int a = static_cast<int>(rng.uniform_int(0, n - 1));
  const int b = static_cast<int>(rng.uniform_int(0, n - 1));
  if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank ? a : b;
  if (pop[a].crowding != pop[b].crowding)
    return pop[a].crowding > pop[b].crowding ? a : b;
  return rng.bernoulli(0.5) ? a : b;
}

std::vector<RunPoint> rank1_points(std::vector<RankedIndividual>& pop) {
  auto fronts = fast_nondominated_sort(pop);
  std::vector<const Evaluated*> best;
  for (const int i : fronts.front()) best.push_back(&pop[i]);
  return collect_points(best);
}

}  // namespace

RunResult nsga2_run(const MoeaConfig& cfg, const Problem& problem,
                    unsigned jobs, const GenerationObserver& observer) {
  cfg.validate();
  if (cfg.algorithm != Algorithm::Nsga2)
    throw std::invalid_argument("nsga2_run: config is not for NSGA-II");
  Rng rng(cfg.seed);
  const int n_pop = cfg.population;
  const double p_mut = cfg.effective_p_mut(problem.n_dampers);

  std::vector<RankedIndividual> pop(static_cast<std::size_t>(n_pop));
  for (auto& individual : pop) individual.genes = random_genes(problem, rng);
  evaluate_population(problem, pop, jobs);
  auto fronts = fast_nondominated_sort(pop);
  for (const auto& front : fronts) assign_crowding(pop, front);

  for (int gen = 1; gen <= cfg.iterations; ++gen) {
    // Variation consumes the run's RNG sequentially; evaluation is pure and
    // may run on any number of workers.
    std::vector<RankedIndividual> offspring;
    offspring.reserve(static_cast<std::size_t>(n_pop));
    while (static_cast<int>(offspring.size()) < n_pop) {
      const int pa = tournament_pick(pop, rng);
      const int pb = tournament_pick(pop, rng);
      auto [g1, g2] = sbx_crossover(pop[pa].genes, pop[pb].genes,
                                    problem.n_positions, cfg.eta_c, cfg.p_c, rng);
      for (Eigen::VectorXd* genes : {&g1, &g2}) {
        for (int k = 1; k <= problem.n_dampers; ++k) {
          if (rng.uniform01() < p_mut) {
            const auto [lo, hi] =
                gene_bounds(problem.n_positions, problem.n_dampers, k);
            (*genes)[k - 1] =
                polynomial_mutation((*genes)[k - 1], lo, hi, cfg.eta_m, rng);
          }
        }
      }
      RankedIndividual child1;
      child1.genes = std::move(g1);
      offspring.push_back(std::move(child1));
      if (static_cast<int>(offspring.size()) < n_pop) {
        RankedIndividual child2;
        child2.genes = std::move(g2);
        offspring.push_back(std::move(child2));
      }
    }
    evaluate_population(problem, offspring, jobs);

    std::vector<RankedIndividual> combined;
    combined.reserve(pop.size() + offspring.size());
    for (auto& individual : pop) combined.push_back(std::move(individual));
    for (auto& individual : offspring) combined.push_back(std::move(individual));
    fronts = fast_nondominated_sort(combined);
    for (const auto& front : fronts) assign_crowding(combined, front);

    std::vector<RankedIndividual> next;
    next.reserve(static_cast<std::size_t>(n_pop));
    for (const auto& front : fronts) {
      if (static_cast<int>(next.size()) == n_pop) break;
      if (static_cast<int>(next.size() + front.size()) <= n_pop) {
        for (const int i : front) next.push_back(std::move(combined[i]));
      } else {
        std::vector<int> order(front);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          return combined[a].crowding > combined[b].crowding;
        });
        for (const int i : order) {
          if (static_cast<int>(next.size()) == n_pop) break;
          next.push_back(std::move(combined[i]));
        }
      }
    }
    pop = std::move(next);
    fronts = fast_nondominated_sort(pop);
    for (const auto& front : fronts) assign_crowding(pop, front);
    if (observer) {
      std::vector<const Evaluated*> best;
      for (const int i : fronts.front()) best.push_back(&pop[i]);
      observer(gen, collect_points(best));
    }
  }

  RunResult result;
  result.algorithm = to_string(cfg.algorithm);
  result.seed = cfg.seed;
  result.n_fe = static_cast<std::uint64_t>(cfg.population) *
                static_cast<std::uint64_t>(cfg.iterations);
  result.points = rank1_points(pop);
  return result;
}

// ---- MOPSO -------------------------------------------------------------

Repository::Repository(int capacity, int grid_divisions)
    : capacity_(capacity), divisions_(grid_divisions) {
  if (capacity_ < 1 || divisions_ < 1)
    throw std::invalid_argument("repository: capacity and divisions must be >= 1");
}

std::vector<int> Repository::cell_of_each() const {
  double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
  double lo2 = lo1, hi2 = -lo1;
  for (const Entry& e : entries_) {
    lo1 = std::min(lo1, e.f1);
    hi1 = std::max(hi1, e.f1);
    lo2 = std::min(lo2, e.f2);
    hi2 = std::max(hi2, e.f2);
  }
  const double span1 = hi1 > lo1 ? hi1 - lo1 : 1.0;
  const double span2 = hi2 > lo2 ? hi2 - lo2 : 1.0;
  std::vector<int> cells(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto g1 = static_cast<int>((entries_[i].f1 - lo1) / span1 * divisions_);
    auto g2 = static_cast<int>((entries_[i].f2 - lo2) / span2 * divisions_);
    g1 = std::min(g1, divisions_ - 1);
    g2 = std::min(g2, divisions_ - 1);
    cells[i] = g1 * divisions_ + g2;
  }
  return cells;
}

bool Repository::insert(Entry entry, Rng& rng) {
  for (const Entry& e : entries_) {
    if (dominates(e.f1, e.f2, entry.f1, entry.f2)) return false;
    if (e.f1 == entry.f1 && e.f2 == entry.f2 && e.config == entry.config)
      return false;  // duplicate
  }
  std::erase_if(entries_, [&](const Entry& e) {
    return dominates(entry.f1, entry.f2, e.f1, e.f2);
  });
  entries_.push_back(std::move(entry));
  while (static_cast<int>(entries_.size()) > capacity_) {
    const auto cells = cell_of_each();
    std::map<int, std::vector<std::size_t>> occupancy;
    for (std::size_t i = 0; i < cells.size(); ++i)
      occupancy[cells[i]].push_back(i);
    const auto densest = std::max_element(
        occupancy.begin(), occupancy.end(), [](const auto& a, const auto& b) {
          return a.second.size() < b.second.size();
        });
    const auto& members = densest->second;
    const auto victim = members[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(members.size()) - 1))];
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  return true;
}

const Repository::Entry& Repository::select_leader(Rng& rng) const {
  if (entries_.empty())
    throw std::logic_error("repository: select_leader on empty archive");
  const auto cells = cell_of_each();
  std::map<int, std::vector<std::size_t>> occupancy;
  for (std::size_t i = 0; i < cells.size(); ++i)
    occupancy[cells[i]].push_back(i);

  double total = 0.0;
  for (const auto& [cell, members] : occupancy)
    total += 10.0 / static_cast<double>(members.size());
  double pick = rng.uniform01() * total;
  const std::vector<std::size_t>* chosen = &occupancy.begin()->second;
  for (const auto& [cell, members] : occupancy) {
    pick -= 10.0 / static_cast<double>(members.size());
    chosen = &members;
    if (pick <= 0.0) break;
  }
  const auto idx = (*chosen)[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(chosen->size()) - 1))];
  return entries_[idx];
}

namespace {

struct SwarmParticle : Evaluated {
  Eigen::VectorXd velocity;
  Eigen::VectorXd best_genes;
  double best_f1 = kPenaltyObjective;
  double best_f2 = kPenaltyObjective;
};

}  // namespace

RunResult mopso_run(const MoeaConfig& cfg, const Problem& problem,
                    unsigned jobs) {
  cfg.validate();
  if (cfg.algorithm != Algorithm::Mopso1 && cfg.algorithm != Algorithm::Mopso2)
    throw std::invalid_argument("mopso_run: config is not for MOPSO");
  Rng rng(cfg.seed);
  const int n_pop = cfg.population;
  const int n_vars = problem.n_dampers;
  const double p_mut = cfg.effective_p_mut(n_vars);
  const bool polynomial = cfg.algorithm == Algorithm::Mopso2;

  std::vector<SwarmParticle> swarm(static_cast<std::size_t>(n_pop));
  for (auto& particle : swarm) {
    particle.genes = random_genes(problem, rng);
    particle.velocity = Eigen::VectorXd::Zero(n_vars);
  }
  evaluate_population(problem, swarm, jobs);

  Repository repository(cfg.repository_capacity, cfg.grid_divisions);
  for (auto& particle : swarm) {
    particle.best_genes = particle.genes;
    particle.best_f1 = particle.f1;
    particle.best_f2 = particle.f2;
    if (!particle.penalty)
      repository.insert({particle.genes, particle.config, particle.f1,
                         particle.f2},
                        rng);
  }

  for (int iteration = 1; iteration <= cfg.iterations; ++iteration) {
    for (auto& particle : swarm) {
      const Eigen::VectorXd& leader = repository.empty()
                                          ? particle.best_genes
                                          : repository.select_leader(rng).genes;
      for (int k = 1; k <= n_vars; ++k) {
        const auto [lo, hi] = gene_bounds(problem.n_positions, n_vars, k);
        const double range = hi - lo;
        const double r1 = rng.uniform01();
        const double r2 = rng.uniform01();
        double v = cfg.w * particle.velocity[k - 1] +
                   cfg.c1 * r1 * (particle.best_genes[k - 1] - particle.genes[k - 1]) +
                   cfg.c2 * r2 * (leader[k - 1] - particle.genes[k - 1]);
        v = std::clamp(v, -range, range);
        double x = particle.genes[k - 1] + v;
        if (x < lo) {
          x = lo;
          v = -v;
        } else if (x > hi) {
          x = hi;
          v = -v;
        }
        particle.velocity[k - 1] = v;
        particle.genes[k - 1] = x;
      }
      if (rng.uniform01() < p_mut) {
        const int k = static_cast<int>(rng.uniform_int(1, n_vars));
        const auto [lo, hi] = gene_bounds(problem.n_positions, n_vars, k);
        particle.genes[k - 1] =
            polynomial
                ? polynomial_mutation(particle.genes[k - 1], lo, hi, cfg.eta_m, rng)
                : rng.uniform(lo, hi);
      }
    }

    evaluate_population(problem, swarm, jobs);

    for (auto& particle : swarm) {
      const bool new_dominates = dominates(particle.f1, particle.f2,
                                           particle.best_f1, particle.best_f2);
      const bool best_dominates = dominates(particle.best_f1, particle.best_f2,
                                            particle.f1, particle.f2);
      if (new_dominates || (!best_dominates && rng.bernoulli(0.5))) {
        particle.best_genes = particle.genes;
        particle.best_f1 = particle.f1;
        particle.best_f2 = particle.f2;
      }
      if (!particle.penalty)
        repository.insert({particle.genes, particle.config, particle.f1,
                           particle.f2},
                          rng);
    }
  }

  RunResult result;
  result.algorithm = to_string(cfg.algorithm);
  result.seed = cfg.seed;
  result.n_fe = static_cast<std::uint64_t>(cfg.population) *
                static_cast<std::uint64_t>(cfg.iterations);
  std::vector<const Evaluated*> best;
  std::vector<Evaluated> holders;
  holders.reserve(repository.entries().size());
  for (const auto& e : repository.entries()) {
    Evaluated holder;
    holder.genes = e.genes;
    holder.config = e.config;
    holder.f1 = e.f1;
    holder.f2 = e.f2;
    holders.push_back(std::move(holder));
  }
  for (const auto& holder : holders) best.push_back(&holder);
  result.points = collect_points(best);
  return result;
}

RunResult run_moea(const MoeaConfig& cfg, const Problem& problem,
                   unsigned jobs) {
  return cfg.algorithm == Algorithm::Nsga2 ? nsga2_run(cfg, problem, jobs)
                                           : mopso_run(cfg, problem, jobs);
}

}  // namespace dsab
