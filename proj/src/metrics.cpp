#include "dsab/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace dsab {

const char* to_string(ObjectiveSet set) {
  switch (set) {
    case ObjectiveSet::LrDisp:
      return "lr_disp";
    case ObjectiveSet::DriftAcc:
      return "drift_acc";
    case ObjectiveSet::DispShear:
      return "disp_shear";
  }
  return "unknown";
}

ObjectiveSet objective_set_from_string(const std::string& text) {
  if (text == "lr_disp") return ObjectiveSet::LrDisp;
  if (text == "drift_acc") return ObjectiveSet::DriftAcc;
  if (text == "disp_shear") return ObjectiveSet::DispShear;
  throw std::invalid_argument("unknown objective set '" + text +
                              "' (expected lr_disp, drift_acc or disp_shear)");
}

namespace {

void require_nonempty(const ResponseHistory& h) {
  if (h.steps() == 0) throw std::invalid_argument("metrics: empty history");
}

}  // namespace

std::pair<double, double> top_floor_displacements(const ResponseHistory& h,
                                                  int n_floors) {
  require_nonempty(h);
  const double left = h.rel_disp.col(n_floors - 1).cwiseAbs().maxCoeff();
  const double right = h.rel_disp.col(2 * n_floors - 1).cwiseAbs().maxCoeff();
  return {left, right};
}

double max_acceleration(const ResponseHistory& h, const MetricsOptions& options) {
  require_nonempty(h);
  return options.absolute_acceleration ? h.abs_acc.cwiseAbs().maxCoeff()
                                       : h.rel_acc.cwiseAbs().maxCoeff();
}

double max_interstorey_drift(const ResponseHistory& h, int n_floors) {
  require_nonempty(h);
  const int n = n_floors;
  double drift = 0.0;
  for (const int offset : {0, n}) {
    // Ground storey: x_1 relative to the ground itself.
    drift = std::max(drift, h.rel_disp.col(offset).cwiseAbs().maxCoeff());
    for (int f = 1; f < n; ++f) {
      const double d = (h.rel_disp.col(offset + f) - h.rel_disp.col(offset + f - 1))
                           .cwiseAbs()
                           .maxCoeff();
      drift = std::max(drift, d);
    }
  }
  return drift;
}

double max_top_displacement(const ResponseHistory& h, int n_floors) {
  const auto [left, right] = top_floor_displacements(h, n_floors);
  return std::max(left, right);
}

double max_base_shear(const ResponseHistory& h, const BuildingParams& params) {
  require_nonempty(h);
  const int n = params.n_floors;
  const double first_floor =
      std::max(h.rel_disp.col(0).cwiseAbs().maxCoeff(),
               h.rel_disp.col(n).cwiseAbs().maxCoeff());
  return params.storey_stiffness * first_floor;
}

ResponseMetrics reduce_metrics(const ResponseHistory& h,
                               const BuildingParams& params,
                               const MetricsOptions& options) {
  require_nonempty(h);
  ResponseMetrics m;
  const auto [left, right] = top_floor_displacements(h, params.n_floors);
  m.top_disp_left = left;
  m.top_disp_right = right;
  m.accel_max = max_acceleration(h, options);
  m.drift_max = max_interstorey_drift(h, params.n_floors);
  m.base_shear_max = max_base_shear(h, params);
  return m;
}

ObjectiveVector project(const ResponseMetrics& metrics, ObjectiveSet set) {
  switch (set) {
    case ObjectiveSet::LrDisp:
      return {metrics.top_disp_left, metrics.top_disp_right, set};
    case ObjectiveSet::DriftAcc:
      return {metrics.drift_max, metrics.accel_max, set};
    case ObjectiveSet::DispShear:
      return {metrics.top_disp_max(), metrics.base_shear_max, set};
  }
  throw std::invalid_argument("unknown objective set");
}

namespace {

std::string cache_key(const DamperConfiguration& config) {
  std::string key;
  key.reserve(config.size());
  for (const int d : config) key.push_back(static_cast<char>(d));
  return key;
}

}  // namespace

Evaluator::Evaluator(EvalContext context, bool memoize)
    : ctx_(std::move(context)), memoize_(memoize) {
  ctx_.building.validate();
  ctx_.damper.validate();
  validate(ctx_.record);
  if (ctx_.links.empty()) ctx_.links = enumerate_positions(ctx_.building.n_floors);
  base_system_ = assemble_system(ctx_.building, ctx_.damper, {}, ctx_.links,
                                 ctx_.model);
}

ResponseMetrics Evaluator::compute_uncached(
    const DamperConfiguration& config) const {
  CouplingMatrices coupling = assemble_coupling(
      config, ctx_.links, ctx_.damper, ctx_.building, ctx_.model.projection);
  CoupledSystem sys = base_system_;
  sys.C_D = std::move(coupling.C_D);
  if (ctx_.model.include_damper_stiffness) sys.K_D = std::move(coupling.K_D);
  const ResponseHistory h = newmark_solve(sys, ctx_.record, ctx_.newmark);
  return reduce_metrics(h, ctx_.building, ctx_.metrics);
}

ResponseMetrics Evaluator::response_metrics(
    const DamperConfiguration& config) const {
  if (!memoize_) return compute_uncached(config);
  const std::string key = cache_key(config);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const ResponseMetrics metrics = compute_uncached(config);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_[key] = metrics;  // identical values on a race; last write wins
  }
  return metrics;
}

ObjectiveVector Evaluator::evaluate(const DamperConfiguration& config,
                                    ObjectiveSet set) const {
  return project(response_metrics(config), set);
}

std::size_t Evaluator::cache_size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

}  // namespace dsab
