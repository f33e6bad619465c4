#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsab/bench.hpp"
#include "dsab/enumeration.hpp"
#include "dsab/ground_motion.hpp"
#include "dsab/metrics.hpp"
#include "dsab/model.hpp"
#include "dsab/moea.hpp"
#include "dsab/solver.hpp"

namespace dsab {

struct SolverSettings {
  double beta = 0.25;
  double gamma = 0.5;
  std::optional<double> dt;  // resample the record when set
};

struct GroundMotionSource {
  std::filesystem::path path;
  std::optional<RecordFormat> format;  // by file extension when unset
};

struct BenchmarkRow {
  Algorithm algorithm = Algorithm::Nsga2;
  int population = 40;
  int iterations = 200;
  int n_runs = 30;
  double p_mut = -1.0;  // < 0: per-algorithm default
};

struct BenchmarkSettings {
  std::uint64_t base_seed = 0;
  std::vector<BenchmarkRow> rows;  // defaults to one row from the moea block
};

// One study: problem definition, solver settings and algorithm settings, as
// read from the JSON config file. Field names match the JSON keys.
struct StudyConfig {
  BuildingParams building;
  DamperParams damper;
  ModelOptions model;
  GroundMotionSource ground_motion;
  ObjectiveSet objective_set = ObjectiveSet::DriftAcc;
  int n_dampers = 3;
  SolverSettings solver;
  MetricsOptions metrics;
  MoeaConfig moea;
  BenchmarkSettings benchmark;
  DamperConfiguration simulate_configuration;  // optional, for `simulate`
};

// Config errors name the offending key path. Relative ground-motion paths
// are resolved against the config file's directory.
StudyConfig load_study_config(const std::filesystem::path& path);
StudyConfig study_config_from_json(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir = {});
nlohmann::json study_config_to_json(const StudyConfig& config);

// Loads the record (resampling if solver.dt is set) and assembles the
// evaluation context.
EvalContext make_eval_context(const StudyConfig& config);

Problem make_problem(const Evaluator& evaluator, ObjectiveSet set,
                     int n_dampers);

nlohmann::json run_result_json(const RunResult& result, const MoeaConfig& cfg);
nlohmann::json hit_matrix_json(const std::vector<BenchmarkReport>& reports);

// Scatter/front CSV in the documented column layout.
std::string scatter_csv(const SolutionSpace& space);
std::string front_csv(const ParetoFront& front);
ParetoFront front_from_csv(const std::string& text, ObjectiveSet set);

}  // namespace dsab
