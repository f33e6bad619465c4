#include "dsab/enumeration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dsab/parallel.hpp"

namespace dsab {

namespace {

// No-throw binomial; 0 when k > n. Exact in 64 bits for the sizes used here.
std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) is a binomial times i!, divisible by i.
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace

std::uint64_t count_configurations(int n_positions, int n_dampers) {
  if (n_positions < 0 || n_dampers < 0)
    throw std::invalid_argument("count_configurations: negative argument");
  if (n_dampers > n_positions)
    throw std::invalid_argument(
        "count_configurations: n_dampers exceeds the number of positions");
  return binomial(n_positions, n_dampers);
}

DamperConfiguration combination_at(int n_positions, int n_dampers,
                                   std::uint64_t rank) {
  const std::uint64_t total = count_configurations(n_positions, n_dampers);
  if (rank >= total && n_dampers > 0)
    throw std::invalid_argument("combination_at: rank out of range");
  DamperConfiguration config;
  config.reserve(static_cast<std::size_t>(n_dampers));
  int value = 1;
  std::uint64_t remaining = rank;
  for (int slot = 0; slot < n_dampers; ++slot) {
    for (;; ++value) {
      const std::uint64_t with_value =
          binomial(n_positions - value, n_dampers - slot - 1);
      if (remaining < with_value) break;
      remaining -= with_value;
    }
    config.push_back(value);
    ++value;
  }
  return config;
}

bool next_combination(DamperConfiguration& config, int n_positions) {
  const int k = static_cast<int>(config.size());
  for (int i = k - 1; i >= 0; --i) {
    if (config[static_cast<std::size_t>(i)] < n_positions - (k - 1 - i)) {
      ++config[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        config[static_cast<std::size_t>(j)] =
            config[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

bool dominates_or_equal(double a1, double a2, double b1, double b2) {
  return a1 <= b1 && a2 <= b2;
}

bool dominates(double a1, double a2, double b1, double b2) {
  return a1 <= b1 && a2 <= b2 && (a1 < b1 || a2 < b2);
}

ParetoFront pareto_filter(
    const std::vector<std::pair<DamperConfiguration, ObjectiveVector>>& entries) {
  if (entries.empty())
    throw std::invalid_argument("pareto_filter: empty input");
  for (const auto& [config, obj] : entries) {
    if (!std::isfinite(obj.f1) || !std::isfinite(obj.f2))
      throw std::invalid_argument("pareto_filter: non-finite objective for " +
                                  configuration_label(config));
  }

  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& oa = entries[a].second;
    const auto& ob = entries[b].second;
    if (oa.f1 != ob.f1) return oa.f1 < ob.f1;
    if (oa.f2 != ob.f2) return oa.f2 < ob.f2;
    return entries[a].first < entries[b].first;
  });

  ParetoFront front;
  double best_f2 = std::numeric_limits<double>::infinity();
  for (std::size_t pos = 0; pos < order.size();) {
    const auto& obj = entries[order[pos]].second;
    std::size_t end = pos;
    while (end < order.size() && entries[order[end]].second.f1 == obj.f1 &&
           entries[order[end]].second.f2 == obj.f2)
      ++end;
    if (obj.f2 < best_f2) {
      best_f2 = obj.f2;
      ParetoPoint point;
      point.objectives = obj;
      for (std::size_t i = pos; i < end; ++i)
        point.configs.push_back(entries[order[i]].first);
      front.points.push_back(std::move(point));
    }
    pos = end;
  }
  return front;
}

ExhaustiveResult exhaustive_front(const Evaluator& evaluator, ObjectiveSet set,
                                  int n_dampers,
                                  const ExhaustiveOptions& options) {
  const int P = evaluator.n_positions();
  const std::uint64_t total64 = count_configurations(P, n_dampers);
  const auto total = static_cast<std::size_t>(total64);

  ExhaustiveResult result;
  result.space.set = set;
  result.space.n_floors = evaluator.context().building.n_floors;
  result.space.n_dampers = n_dampers;
  result.space.entries.resize(total);
  auto& entries = result.space.entries;

  const auto t0 = std::chrono::steady_clock::now();
  parallel_chunks(
      total, options.chunk_size, options.jobs,
      [&](std::size_t first, std::size_t last, std::size_t) {
        DamperConfiguration config = combination_at(P, n_dampers, first);
        for (std::size_t r = first; r < last; ++r) {
          try {
            entries[r] = {config, evaluator.evaluate(config, set)};
          } catch (const std::exception& e) {
            throw std::runtime_error("evaluation failed for configuration " +
                                     configuration_label(config) + ": " +
                                     e.what());
          }
          if (r + 1 < last) next_combination(config, P);
        }
      });
  const auto t1 = std::chrono::steady_clock::now();
  result.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  result.mean_eval_ms =
      total == 0 ? 0.0 : result.wall_seconds * 1000.0 / static_cast<double>(total);

  result.front = pareto_filter(entries);
  for (auto& point : result.front.points)
    std::sort(point.configs.begin(), point.configs.end());
  return result;
}

}  // namespace dsab
