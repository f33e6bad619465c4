#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "dsab/enumeration.hpp"
#include "dsab/moea.hpp"
#include "support/test_support.hpp"

using namespace dsab;

namespace {

// Cheap separable toy problem: f1 rewards low positions, f2 rewards high
// ones, so the two objectives conflict along the whole chain.
Problem toy_problem(int n_positions, int n_dampers) {
  Problem problem;
  problem.n_positions = n_positions;
  problem.n_dampers = n_dampers;
  problem.set = ObjectiveSet::DriftAcc;
  problem.objectives = [n_positions](const DamperConfiguration& config) {
    double low = 0.0;
    double high = 0.0;
    for (const int d : config) {
      low += d;
      high += n_positions + 1 - d;
    }
    return std::make_pair(low, high);
  };
  return problem;
}

bool points_equal(const std::vector<RunPoint>& a,
                  const std::vector<RunPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].config != b[i].config || a[i].f1 != b[i].f1 || a[i].f2 != b[i].f2)
      return false;
  }
  return true;
}

EvalContext six_storey_context() {
  EvalContext ctx;
  ctx.building = BuildingParams{6};
  ctx.damper = DamperParams{};
  ctx.links = enumerate_positions(6);
  ctx.record = synthetic_record(8.0, 0.02, 3.1, 5);
  return ctx;
}

Problem solver_problem(const Evaluator& evaluator, ObjectiveSet set,
                       int n_dampers) {
  Problem problem;
  problem.n_positions = evaluator.n_positions();
  problem.n_dampers = n_dampers;
  problem.set = set;
  problem.objectives = [&evaluator, set](const DamperConfiguration& config) {
    const auto obj = evaluator.evaluate(config, set);
    return std::make_pair(obj.f1, obj.f2);
  };
  return problem;
}

}  // namespace

TEST_SUITE("moea") {

TEST_CASE("gene bounds follow the box restriction") {
  CHECK(gene_bounds(16, 3, 1) == std::pair{1.0, 14.0});
  CHECK(gene_bounds(16, 3, 2) == std::pair{2.0, 15.0});
  CHECK(gene_bounds(16, 3, 3) == std::pair{3.0, 16.0});
  CHECK(gene_bounds(28, 6, 6) == std::pair{6.0, 28.0});
  CHECK_THROWS_AS(gene_bounds(16, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(gene_bounds(16, 3, 4), std::invalid_argument);
}

TEST_CASE("decode: rounding, ordering and penalties") {
  Eigen::VectorXd genes(3);
  genes << 2.2, 4.4, 7.3;
  auto decoded = decode_genes(genes, 16);
  CHECK_FALSE(decoded.penalty);
  CHECK(decoded.config == DamperConfiguration{2, 4, 7});

  genes << 2.0, 7.0, 4.0;  // violates the ordering rule
  decoded = decode_genes(genes, 16);
  CHECK(decoded.penalty);
  CHECK(decoded.config.empty());

  genes << 3.5, 3.6, 9.0;  // rounds to 4, 4, 9: duplicate
  decoded = decode_genes(genes, 16);
  CHECK(decoded.penalty);

  genes << 1.0, 2.0, 16.0;  // slot 3 clamps into [3, 16]
  decoded = decode_genes(genes, 16);
  CHECK_FALSE(decoded.penalty);
  CHECK(decoded.config == DamperConfiguration{1, 2, 16});
}

TEST_CASE("decode: rounding is half away from zero") {
  Eigen::VectorXd genes(2);
  genes << 1.5, 2.5;
  const auto decoded = decode_genes(genes, 10);
  CHECK(decoded.config == DamperConfiguration{2, 3});
}

TEST_CASE("sbx: p_c = 0 copies the parents") {
  Rng rng(1);
  Eigen::VectorXd a(3), b(3);
  a << 2.0, 5.0, 9.0;
  b << 3.0, 6.0, 10.0;
  const auto [c1, c2] = sbx_crossover(a, b, 16, 15.0, 0.0, rng);
  CHECK(c1 == a);
  CHECK(c2 == b);
}

TEST_CASE("sbx: identical parents breed identical children") {
  Rng rng(2);
  Eigen::VectorXd a(3);
  a << 4.0, 8.0, 12.0;
  const auto [c1, c2] = sbx_crossover(a, a, 16, 15.0, 1.0, rng);
  CHECK(c1.isApprox(a));
  CHECK(c2.isApprox(a));
}

TEST_CASE("sbx: slot means are preserved over many crossovers") {
  Rng rng(3);
  Eigen::VectorXd a(1), b(1);
  a << 5.0;
  b << 10.0;
  // Bounds [1, 16] leave the spread essentially unclamped.
  double sum_c1 = 0.0;
  double sum_c2 = 0.0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const auto [c1, c2] = sbx_crossover(a, b, 16, 15.0, 1.0, rng);
    sum_c1 += c1[0];
    sum_c2 += c2[0];
  }
  const double mean = (sum_c1 + sum_c2) / (2.0 * trials);
  CHECK(mean == doctest::Approx(7.5).epsilon(0.01));
}

TEST_CASE("polynomial mutation: median draw leaves the value unchanged") {
  CHECK(polynomial_mutation_delta(0.5, 7.0) == doctest::Approx(0.0));
  CHECK(polynomial_mutation_delta(0.5 - 1e-16, 7.0) ==
        doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("polynomial mutation: delta quantiles match the analytic CDF") {
  // Validate the test helper pair first, then the implementation against it.
  for (const double q : {0.01, 0.2, 0.5, 0.77, 0.99}) {
    const double d = testing::polynomial_delta_quantile(q, 7.0);
    CHECK(testing::polynomial_delta_cdf(d, 7.0) == doctest::Approx(q));
    CHECK(polynomial_mutation_delta(q, 7.0) == doctest::Approx(d));
  }
}

TEST_CASE("polynomial mutation: chi-square fit against the density") {
  const double eta = 7.0;
  const int bins = 50;
  const int samples = 100000;
  Rng rng(11);

  // Equal-probability bins from the analytic CDF.
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  edges[0] = -1.0;
  edges[static_cast<std::size_t>(bins)] = 1.0;
  for (int b = 1; b < bins; ++b)
    edges[static_cast<std::size_t>(b)] = testing::polynomial_delta_quantile(
        static_cast<double>(b) / bins, eta);

  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double delta = polynomial_mutation_delta(rng.uniform01(), eta);
    sum += delta;
    const auto bin = static_cast<std::size_t>(
        std::upper_bound(edges.begin() + 1, edges.end(), delta) -
        (edges.begin() + 1));
    counts[std::min(bin, static_cast<std::size_t>(bins - 1))]++;
  }

  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double expected =
        samples * (testing::polynomial_delta_cdf(edges[b + 1], eta) -
                   testing::polynomial_delta_cdf(edges[b], eta));
    const double diff = counts[static_cast<std::size_t>(b)] - expected;
    chi2 += diff * diff / expected;
  }
  const double p = testing::chi_square_p_value(chi2, bins - 1);
  CHECK(p > 0.01);

  // E[delta] = 0; Var[delta] = 2 / ((eta + 2)(eta + 3)).
  const double sigma = std::sqrt(2.0 / ((eta + 2.0) * (eta + 3.0)) / samples);
  CHECK(std::abs(sum / samples) < 3.0 * sigma);
}

TEST_CASE("mutated values stay inside their bounds") {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double x = polynomial_mutation(rng.uniform(2.0, 15.0), 2.0, 15.0,
                                         7.0, rng);
    CHECK(x >= 2.0);
    CHECK(x <= 15.0);
  }
}

TEST_CASE("nsga2: zero iterations returns the nondominated initial sample") {
  MoeaConfig cfg;
  cfg.iterations = 0;
  cfg.population = 20;
  cfg.seed = 7;
  const Problem problem = toy_problem(16, 3);
  const auto result = nsga2_run(cfg, problem);
  CHECK(result.n_fe == 0);
  REQUIRE(!result.points.empty());
  // Returned points are mutually nondominated and decode-valid.
  for (const auto& a : result.points) {
    int prev = 0;
    for (const int d : a.config) {
      CHECK(d > prev);
      prev = d;
      CHECK(d <= 16);
    }
    for (const auto& b : result.points) {
      if (&a == &b) continue;
      CHECK_FALSE(dominates(a.f1, a.f2, b.f1, b.f2));
    }
  }
}

TEST_CASE("nsga2: fixed seeds reproduce bitwise, distinct seeds differ") {
  MoeaConfig cfg;
  cfg.population = 24;
  cfg.iterations = 15;
  cfg.seed = 42;
  const Problem problem = toy_problem(16, 3);
  const auto first = nsga2_run(cfg, problem);
  const auto second = nsga2_run(cfg, problem);
  CHECK(points_equal(first.points, second.points));
  CHECK(first.n_fe == 24 * 15);

  cfg.seed = 43;
  const auto third = nsga2_run(cfg, problem);
  CHECK_FALSE(points_equal(first.points, third.points));
}

TEST_CASE("nsga2: evaluation workers do not perturb the run") {
  MoeaConfig cfg;
  cfg.population = 16;
  cfg.iterations = 10;
  cfg.seed = 5;
  const Problem problem = toy_problem(16, 3);
  const auto serial = nsga2_run(cfg, problem, 1);
  const auto parallel = nsga2_run(cfg, problem, 4);
  CHECK(points_equal(serial.points, parallel.points));
}

TEST_CASE("nsga2: elitism never loses ground between generations") {
  MoeaConfig cfg;
  cfg.population = 20;
  cfg.iterations = 25;
  cfg.seed = 9;
  const Problem problem = toy_problem(16, 3);
  std::vector<std::vector<RunPoint>> generations;
  nsga2_run(cfg, problem, 1,
            [&](int, const std::vector<RunPoint>& rank1) {
              generations.push_back(rank1);
            });
  REQUIRE(generations.size() == 25);
  for (std::size_t g = 1; g < generations.size(); ++g) {
    for (const auto& current : generations[g]) {
      for (const auto& previous : generations[g - 1]) {
        CHECK_FALSE(dominates(previous.f1, previous.f2, current.f1, current.f2));
      }
    }
  }
}

TEST_CASE("nsga2: on the toy problem the true front is recovered") {
  // The toy objectives are linear in the positions; every configuration lies
  // on the f1 + f2 = n * (P + 1) line, so all valid configurations are
  // mutually nondominated and the run must return valid points only.
  MoeaConfig cfg;
  cfg.population = 30;
  cfg.iterations = 20;
  cfg.seed = 3;
  const Problem problem = toy_problem(10, 2);
  const auto result = nsga2_run(cfg, problem);
  for (const auto& point : result.points)
    CHECK(point.f1 + point.f2 == doctest::Approx(2.0 * 11.0));
}

TEST_CASE("repository: dominated insertions are no-ops") {
  Rng rng(1);
  Repository repo(10, 5);
  Repository::Entry good;
  good.config = {1};
  good.f1 = 1.0;
  good.f2 = 2.0;
  CHECK(repo.insert(good, rng));
  Repository::Entry dominated;
  dominated.config = {2};
  dominated.f1 = 2.0;
  dominated.f2 = 3.0;
  CHECK_FALSE(repo.insert(dominated, rng));
  CHECK(repo.entries().size() == 1);

  Repository::Entry duplicate = good;
  CHECK_FALSE(repo.insert(duplicate, rng));
  CHECK(repo.entries().size() == 1);

  Repository::Entry better;
  better.config = {3};
  better.f1 = 0.5;
  better.f2 = 1.0;
  CHECK(repo.insert(better, rng));
  CHECK(repo.entries().size() == 1);
  CHECK(repo.entries()[0].config == DamperConfiguration{3});
}

TEST_CASE("repository: stays pairwise nondominated under random traffic") {
  Rng rng(8);
  Repository repo(12, 6);
  for (int i = 0; i < 400; ++i) {
    Repository::Entry e;
    e.config = {static_cast<int>(rng.uniform_int(1, 16))};
    e.f1 = static_cast<double>(rng.uniform_int(0, 20));
    e.f2 = static_cast<double>(rng.uniform_int(0, 20));
    repo.insert(e, rng);
    CHECK(static_cast<int>(repo.entries().size()) <= 12);
    for (const auto& a : repo.entries()) {
      for (const auto& b : repo.entries()) {
        if (&a == &b) continue;
        CHECK_FALSE(dominates(a.f1, a.f2, b.f1, b.f2));
      }
    }
  }
}

TEST_CASE("mopso: degenerate coefficients freeze the swarm") {
  MoeaConfig cfg;
  cfg.algorithm = Algorithm::Mopso1;
  cfg.population = 16;
  cfg.iterations = 8;
  cfg.p_mut = 0.0;
  cfg.w = 0.0;
  cfg.c1 = 0.0;
  cfg.c2 = 0.0;
  cfg.seed = 6;
  const Problem problem = toy_problem(16, 3);
  const auto frozen = mopso_run(cfg, problem);

  cfg.iterations = 0;
  const auto initial = mopso_run(cfg, problem);
  CHECK(points_equal(frozen.points, initial.points));
}

TEST_CASE("mopso: fixed seeds reproduce bitwise for both variants") {
  const Problem problem = toy_problem(16, 3);
  for (const Algorithm algorithm : {Algorithm::Mopso1, Algorithm::Mopso2}) {
    MoeaConfig cfg;
    cfg.algorithm = algorithm;
    cfg.population = 20;
    cfg.iterations = 12;
    cfg.seed = 31;
    const auto first = mopso_run(cfg, problem);
    const auto second = mopso_run(cfg, problem);
    CHECK(points_equal(first.points, second.points));
    CHECK(first.n_fe == 20 * 12);
  }
}

TEST_CASE("default mutation probabilities follow the algorithm") {
  MoeaConfig cfg;
  cfg.algorithm = Algorithm::Nsga2;
  CHECK(cfg.effective_p_mut(4) == doctest::Approx(0.25));
  cfg.algorithm = Algorithm::Mopso1;
  CHECK(cfg.effective_p_mut(4) == doctest::Approx(0.05));
  cfg.p_mut = 0.2;
  CHECK(cfg.effective_p_mut(4) == doctest::Approx(0.2));
}

TEST_CASE("moea outputs never leave the oracle-dominated region") {
  const EvalContext ctx = six_storey_context();
  const Evaluator evaluator(ctx);
  const auto oracle = exhaustive_front(evaluator, ObjectiveSet::LrDisp, 3);
  const Problem lr = solver_problem(evaluator, ObjectiveSet::LrDisp, 3);

  const auto oracle_drift =
      exhaustive_front(evaluator, ObjectiveSet::DriftAcc, 3);
  const Problem drift = solver_problem(evaluator, ObjectiveSet::DriftAcc, 3);

  auto check_against = [](const RunResult& run, const ParetoFront& front) {
    REQUIRE(!run.points.empty());
    for (const auto& point : run.points) {
      bool covered = false;
      for (const auto& fp : front.points) {
        CHECK_FALSE(
            dominates(point.f1, point.f2, fp.objectives.f1, fp.objectives.f2));
        if (dominates_or_equal(fp.objectives.f1, fp.objectives.f2, point.f1,
                               point.f2))
          covered = true;
      }
      CHECK(covered);
    }
  };

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    MoeaConfig nsga;
    nsga.population = 24;
    nsga.iterations = 30;
    nsga.seed = seed;
    check_against(nsga2_run(nsga, lr), oracle.front);

    MoeaConfig mopso1;
    mopso1.algorithm = Algorithm::Mopso1;
    mopso1.population = 24;
    mopso1.iterations = 30;
    mopso1.seed = seed;
    check_against(mopso_run(mopso1, drift), oracle_drift.front);

    MoeaConfig mopso2;
    mopso2.algorithm = Algorithm::Mopso2;
    mopso2.population = 24;
    mopso2.iterations = 30;
    mopso2.seed = seed;
    check_against(mopso_run(mopso2, drift), oracle_drift.front);
  }
}

}  // TEST_SUITE
