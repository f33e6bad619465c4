#pragma once

#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include "dsab/ground_motion.hpp"
#include "dsab/model.hpp"
#include "dsab/solver.hpp"

namespace dsab {

// The three objective pairs reported by the toolkit:
//   LrDisp    - (max |top-floor disp|, left building; same, right building)
//   DriftAcc  - (max interstorey drift; max floor acceleration)
//   DispShear - (max top-floor displacement; max base shear)
// All are sup-norms over time and both buildings.
enum class ObjectiveSet { LrDisp, DriftAcc, DispShear };

const char* to_string(ObjectiveSet set);
ObjectiveSet objective_set_from_string(const std::string& text);

struct ObjectiveVector {
  double f1 = 0.0;
  double f2 = 0.0;
  ObjectiveSet set = ObjectiveSet::LrDisp;
};

struct MetricsOptions {
  // Floor acceleration as absolute (relative + ground) when true; relative
  // otherwise.
  bool absolute_acceleration = true;
};

std::pair<double, double> top_floor_displacements(const ResponseHistory& h,
                                                  int n_floors);
double max_acceleration(const ResponseHistory& h,
                        const MetricsOptions& options = {});
double max_interstorey_drift(const ResponseHistory& h, int n_floors);
double max_top_displacement(const ResponseHistory& h, int n_floors);
double max_base_shear(const ResponseHistory& h, const BuildingParams& params);

// All scalar reductions of one response in a single pass.
struct ResponseMetrics {
  double top_disp_left = 0.0;
  double top_disp_right = 0.0;
  double accel_max = 0.0;
  double drift_max = 0.0;
  double base_shear_max = 0.0;

  double top_disp_max() const {
    return top_disp_left > top_disp_right ? top_disp_left : top_disp_right;
  }
};

ResponseMetrics reduce_metrics(const ResponseHistory& h,
                               const BuildingParams& params,
                               const MetricsOptions& options = {});

ObjectiveVector project(const ResponseMetrics& metrics, ObjectiveSet set);

// Everything needed to turn a damper configuration into objectives.
struct EvalContext {
  BuildingParams building;
  DamperParams damper;
  ModelOptions model;
  std::vector<LinkTopology> links;
  GroundMotionRecord record;
  NewmarkParams newmark;
  MetricsOptions metrics;
};

// Assembles, solves and reduces; deterministic for fixed inputs. Results are
// memoized by configuration unless disabled; the cache is safe for
// concurrent insert/read and cached values are bitwise identical to fresh
// ones.
class Evaluator {
 public:
  explicit Evaluator(EvalContext context, bool memoize = true);

  const EvalContext& context() const { return ctx_; }
  int n_positions() const { return static_cast<int>(ctx_.links.size()); }

  ResponseMetrics response_metrics(const DamperConfiguration& config) const;
  ResponseMetrics compute_uncached(const DamperConfiguration& config) const;
  ObjectiveVector evaluate(const DamperConfiguration& config,
                           ObjectiveSet set) const;

  std::size_t cache_size() const;

 private:
  EvalContext ctx_;
  bool memoize_;
  CoupledSystem base_system_;  // zero coupling matrices
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, ResponseMetrics> cache_;
};

}  // namespace dsab
