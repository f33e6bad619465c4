#include "dsab/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dsab/parallel.hpp"

namespace dsab {

bool objectives_match(double a1, double a2, double b1, double b2,
                      double rel_tol) {
  const auto close = [rel_tol](double a, double b) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
  };
  return close(a1, b1) && close(a2, b2);
}

std::vector<double> BenchmarkReport::success_rates() const {
  std::vector<double> rates(hits.size());
  for (std::size_t k = 0; k < hits.size(); ++k)
    rates[k] = n_runs == 0 ? 0.0 : static_cast<double>(hits[k]) / n_runs;
  return rates;
}

namespace {

void validate_oracle(const ParetoFront& oracle, const Problem& problem) {
  if (oracle.points.empty())
    throw std::invalid_argument("benchmark: empty oracle front");
  for (const auto& point : oracle.points) {
    if (point.objectives.set != problem.set)
      throw std::invalid_argument(
          "benchmark: oracle objective set does not match the problem");
    for (const auto& config : point.configs) {
      if (static_cast<int>(config.size()) != problem.n_dampers)
        throw std::invalid_argument(
            "benchmark: oracle damper count does not match the problem");
      if (!is_valid_configuration(config, problem.n_positions))
        throw std::invalid_argument(
            "benchmark: oracle configuration out of range for the problem");
    }
  }
}

}  // namespace

BenchmarkReport run_benchmark_with_runner(
    const Runner& runner, const std::string& algorithm, int population,
    int iterations, double p_mut, int n_runs, std::uint64_t base_seed,
    const ParetoFront& oracle, std::uint64_t space_size, unsigned jobs) {
  if (n_runs < 1) throw std::invalid_argument("benchmark: n_runs must be >= 1");
  if (oracle.points.empty())
    throw std::invalid_argument("benchmark: empty oracle front");

  BenchmarkReport report;
  report.algorithm = algorithm;
  report.population = population;
  report.iterations = iterations;
  report.n_runs = n_runs;
  report.p_mut = p_mut;
  report.ce = static_cast<double>(population) * iterations * n_runs /
              static_cast<double>(space_size);
  const std::size_t front_size = oracle.points.size();
  report.hit_matrix.assign(static_cast<std::size_t>(n_runs),
                           std::vector<bool>(front_size, false));

  parallel_chunks(
      static_cast<std::size_t>(n_runs), 1, jobs,
      [&](std::size_t first, std::size_t last, std::size_t) {
        for (std::size_t r = first; r < last; ++r) {
          const RunResult run = runner(base_seed + r + 1);
          for (std::size_t k = 0; k < front_size; ++k) {
            const auto& target = oracle.points[k].objectives;
            for (const RunPoint& point : run.points) {
              if (objectives_match(point.f1, point.f2, target.f1, target.f2)) {
                report.hit_matrix[r][k] = true;
                break;
              }
            }
          }
        }
      });

  report.hits.assign(front_size, 0);
  for (const auto& row : report.hit_matrix)
    for (std::size_t k = 0; k < front_size; ++k)
      if (row[k]) ++report.hits[k];
  return report;
}

BenchmarkReport run_benchmark(const MoeaConfig& cfg, const Problem& problem,
                              int n_runs, const ParetoFront& oracle,
                              std::uint64_t space_size, unsigned jobs) {
  cfg.validate();
  validate_oracle(oracle, problem);
  const Runner runner = [&cfg, &problem, jobs](std::uint64_t seed) {
    MoeaConfig run_cfg = cfg;
    run_cfg.seed = seed;
    return run_moea(run_cfg, problem, jobs);
  };
  return run_benchmark_with_runner(
      runner, to_string(cfg.algorithm), cfg.population, cfg.iterations,
      cfg.effective_p_mut(problem.n_dampers), n_runs, cfg.seed, oracle,
      space_size, 1);
}

namespace {

std::string format_ce(double ce) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", ce);
  return buf;
}

std::string format_p_mut(double p_mut) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", p_mut);
  return buf;
}

std::size_t max_front_size(const std::vector<BenchmarkReport>& reports) {
  std::size_t k = 0;
  for (const auto& r : reports) k = std::max(k, r.hits.size());
  return k;
}

bool mixed_front_sizes(const std::vector<BenchmarkReport>& reports) {
  for (const auto& r : reports)
    if (r.hits.size() != reports.front().hits.size()) return true;
  return false;
}

}  // namespace

std::string benchmark_table_csv(const std::vector<BenchmarkReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("benchmark table: no reports");
  const std::size_t k_max = max_front_size(reports);
  std::ostringstream out;
  if (mixed_front_sizes(reports))
    out << "# warning: reports have differing front sizes; missing entries "
           "are '-'\n";
  out << "algorithm,population,iterations,runs,p_mut,ce";
  for (std::size_t k = 1; k <= k_max; ++k) out << ",sr_" << k;
  out << '\n';
  for (const auto& r : reports) {
    out << r.algorithm << ',' << r.population << ',' << r.iterations << ','
        << r.n_runs << ',' << format_p_mut(r.p_mut) << ',' << format_ce(r.ce);
    for (std::size_t k = 0; k < k_max; ++k) {
      out << ',';
      if (k < r.hits.size())
        out << r.hits[k] << '/' << r.n_runs;
      else
        out << '-';
    }
    out << '\n';
  }
  return out.str();
}

std::string benchmark_table_text(const std::vector<BenchmarkReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("benchmark table: no reports");
  const std::size_t k_max = max_front_size(reports);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"algorithm", "N_p", "N_iter", "N_r",
                                  "p_mut",     "CE"};
  for (std::size_t k = 1; k <= k_max; ++k)
    header.push_back("SR(" + std::to_string(k) + ")");
  rows.push_back(header);
  for (const auto& r : reports) {
    std::vector<std::string> row{r.algorithm,
                                 std::to_string(r.population),
                                 std::to_string(r.iterations),
                                 std::to_string(r.n_runs),
                                 format_p_mut(r.p_mut),
                                 format_ce(r.ce)};
    for (std::size_t k = 0; k < k_max; ++k)
      row.push_back(k < r.hits.size() ? std::to_string(r.hits[k]) + "/" +
                                            std::to_string(r.n_runs)
                                      : "-");
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());

  std::ostringstream out;
  if (mixed_front_sizes(reports))
    out << "warning: reports have differing front sizes\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size())
        out << std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dsab
