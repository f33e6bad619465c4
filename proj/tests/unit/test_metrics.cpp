#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dsab/metrics.hpp"
#include "dsab/rng.hpp"
#include "support/test_support.hpp"

using namespace dsab;

namespace {

ResponseHistory random_history(Eigen::Index steps, Eigen::Index dof,
                               std::uint64_t seed) {
  Rng rng(seed);
  ResponseHistory h;
  h.dt = 0.01;
  for (Eigen::MatrixXd* m : {&h.rel_disp, &h.rel_vel, &h.rel_acc, &h.abs_acc}) {
    m->resize(steps, dof);
    for (Eigen::Index i = 0; i < steps; ++i)
      for (Eigen::Index j = 0; j < dof; ++j)
        (*m)(i, j) = rng.uniform(-1.0, 1.0);
  }
  return h;
}

ResponseHistory reversed(const ResponseHistory& h) {
  ResponseHistory out = h;
  out.rel_disp = h.rel_disp.colwise().reverse();
  out.rel_vel = h.rel_vel.colwise().reverse();
  out.rel_acc = h.rel_acc.colwise().reverse();
  out.abs_acc = h.abs_acc.colwise().reverse();
  return out;
}

EvalContext six_storey_context(std::uint64_t record_seed = 5) {
  EvalContext ctx;
  ctx.building = BuildingParams{6};
  ctx.damper = DamperParams{};
  ctx.links = enumerate_positions(6);
  ctx.record = synthetic_record(8.0, 0.02, 3.1, record_seed);
  return ctx;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("zero history reduces to zero metrics") {
  ResponseHistory h;
  h.dt = 0.01;
  h.rel_disp = Eigen::MatrixXd::Zero(10, 4);
  h.rel_vel = h.rel_disp;
  h.rel_acc = h.rel_disp;
  h.abs_acc = h.rel_disp;
  const auto [left, right] = top_floor_displacements(h, 2);
  CHECK(left == 0.0);
  CHECK(right == 0.0);
  CHECK(max_acceleration(h) == 0.0);
  CHECK(max_interstorey_drift(h, 2) == 0.0);
  CHECK(max_top_displacement(h, 2) == 0.0);
  BuildingParams p{2};
  CHECK(max_base_shear(h, p) == 0.0);
}

TEST_CASE("empty history is rejected") {
  ResponseHistory h;
  CHECK_THROWS_AS(max_acceleration(h), std::invalid_argument);
}

TEST_CASE("single-storey pair: drift equals displacement") {
  ResponseHistory h;
  h.dt = 0.01;
  h.rel_disp = Eigen::MatrixXd::Zero(3, 2);
  h.rel_disp << 0.0, 0.0, 0.004, -0.002, -0.006, 0.001;
  h.rel_vel = h.rel_acc = h.abs_acc = Eigen::MatrixXd::Zero(3, 2);
  CHECK(max_interstorey_drift(h, 1) ==
        doctest::Approx(max_top_displacement(h, 1)));
  CHECK(max_interstorey_drift(h, 1) == doctest::Approx(0.006));
}

TEST_CASE("static unit first-floor displacement gives shear k") {
  BuildingParams p{2};
  ResponseHistory h;
  h.dt = 0.01;
  h.rel_disp = Eigen::MatrixXd::Zero(2, 4);
  h.rel_disp(1, 0) = 1.0;  // left building, first floor
  h.rel_vel = h.rel_acc = h.abs_acc = Eigen::MatrixXd::Zero(2, 4);
  CHECK(max_base_shear(h, p) == doctest::Approx(p.storey_stiffness));
}

TEST_CASE("max_top_displacement equals the larger of the pair") {
  const auto h = random_history(40, 8, 2);
  const auto [left, right] = top_floor_displacements(h, 4);
  CHECK(max_top_displacement(h, 4) == doctest::Approx(std::max(left, right)));
}

TEST_CASE("metrics are invariant under time reversal") {
  const auto h = random_history(60, 12, 9);
  const auto r = reversed(h);
  BuildingParams p{6};
  CHECK(max_acceleration(h) == doctest::Approx(max_acceleration(r)));
  CHECK(max_interstorey_drift(h, 6) ==
        doctest::Approx(max_interstorey_drift(r, 6)));
  CHECK(max_top_displacement(h, 6) ==
        doctest::Approx(max_top_displacement(r, 6)));
  CHECK(max_base_shear(h, p) == doctest::Approx(max_base_shear(r, p)));
}

TEST_CASE("drift dominates top displacement divided by floor count") {
  // |x_top| <= sum of storey drifts <= n * max drift.
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto h = random_history(50, 12, seed);
    CHECK(max_interstorey_drift(h, 6) >= max_top_displacement(h, 6) / 6.0);
  }
}

TEST_CASE("uncoupled identical buildings: left equals right") {
  const EvalContext ctx = six_storey_context();
  const Evaluator evaluator(ctx);
  const auto metrics = evaluator.response_metrics({});
  CHECK(metrics.top_disp_left == metrics.top_disp_right);
}

TEST_CASE("rigid-stiffness limit: absolute acceleration tracks the ground") {
  BuildingParams p{2};
  p.storey_stiffness = 1e12;
  EvalContext ctx;
  ctx.building = p;
  ctx.damper = DamperParams{};
  ctx.links = enumerate_positions(2);
  ctx.record = synthetic_record(6.0, 0.01, 2.0, 4);
  const Evaluator evaluator(ctx);
  const auto metrics = evaluator.response_metrics({});
  double ground_peak = 0.0;
  for (const double a : ctx.record.accel)
    ground_peak = std::max(ground_peak, std::abs(a));
  CHECK(metrics.accel_max == doctest::Approx(ground_peak).epsilon(0.02));
}

TEST_CASE("mirrored configurations swap the displacement pair") {
  const EvalContext ctx = six_storey_context();
  const Evaluator evaluator(ctx);
  const auto links = ctx.links;
  const DamperConfiguration config{2, 5, 9};
  const DamperConfiguration mirrored = mirror_configuration(config, links);
  REQUIRE(config != mirrored);

  const auto direct = evaluator.evaluate(config, ObjectiveSet::LrDisp);
  const auto image = evaluator.evaluate(mirrored, ObjectiveSet::LrDisp);
  CHECK(direct.f1 == doctest::Approx(image.f2).epsilon(1e-9));
  CHECK(direct.f2 == doctest::Approx(image.f1).epsilon(1e-9));

  for (const ObjectiveSet set :
       {ObjectiveSet::DriftAcc, ObjectiveSet::DispShear}) {
    const auto a = evaluator.evaluate(config, set);
    const auto b = evaluator.evaluate(mirrored, set);
    CHECK(a.f1 == doctest::Approx(b.f1).epsilon(1e-9));
    CHECK(a.f2 == doctest::Approx(b.f2).epsilon(1e-9));
  }
}

TEST_CASE("evaluation is deterministic and the cache is bitwise faithful") {
  const EvalContext ctx = six_storey_context();
  const Evaluator cached(ctx, true);
  const Evaluator fresh(ctx, false);
  const DamperConfiguration config{1, 8, 14};

  const auto first = cached.response_metrics(config);
  const auto second = cached.response_metrics(config);  // served from cache
  const auto direct = fresh.response_metrics(config);
  CHECK(cached.cache_size() == 1);
  CHECK(first.top_disp_left == second.top_disp_left);
  CHECK(first.accel_max == second.accel_max);
  CHECK(first.drift_max == second.drift_max);
  CHECK(first.base_shear_max == second.base_shear_max);
  CHECK(first.top_disp_left == direct.top_disp_left);
  CHECK(first.accel_max == direct.accel_max);
  CHECK(first.drift_max == direct.drift_max);
  CHECK(first.base_shear_max == direct.base_shear_max);
}

TEST_CASE("objective projections name the right components") {
  ResponseMetrics m;
  m.top_disp_left = 1.0;
  m.top_disp_right = 2.0;
  m.accel_max = 3.0;
  m.drift_max = 4.0;
  m.base_shear_max = 5.0;
  const auto lr = project(m, ObjectiveSet::LrDisp);
  CHECK(lr.f1 == 1.0);
  CHECK(lr.f2 == 2.0);
  const auto da = project(m, ObjectiveSet::DriftAcc);
  CHECK(da.f1 == 4.0);
  CHECK(da.f2 == 3.0);
  const auto ds = project(m, ObjectiveSet::DispShear);
  CHECK(ds.f1 == 2.0);
  CHECK(ds.f2 == 5.0);
}

TEST_CASE("objective set names round-trip") {
  for (const ObjectiveSet set :
       {ObjectiveSet::LrDisp, ObjectiveSet::DriftAcc, ObjectiveSet::DispShear})
    CHECK(objective_set_from_string(to_string(set)) == set);
  CHECK_THROWS_AS(objective_set_from_string("nope"), std::invalid_argument);
}

}  // TEST_SUITE
