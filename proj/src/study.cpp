#include "dsab/study.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dsab/io_util.hpp"

namespace dsab {

namespace {

// Typed JSON access that reports the full key path on any failure.
class Cursor {
 public:
  Cursor(const nlohmann::json& j, std::string path)
      : j_(&j), path_(std::move(path)) {}

  bool has(const char* key) const { return j_->contains(key); }

  Cursor child(const char* key) const {
    if (!j_->contains(key)) fail(std::string(key) + ": missing section");
    if (!(*j_)[key].is_object()) fail(std::string(key) + ": expected an object");
    return Cursor((*j_)[key], path_ + key + ".");
  }

  std::optional<Cursor> maybe_child(const char* key) const {
    if (!j_->contains(key)) return std::nullopt;
    return child(key);
  }

  template <typename T>
  T get(const char* key, T fallback) const {
    if (!j_->contains(key)) return fallback;
    return fetch<T>(key);
  }

  template <typename T>
  T require(const char* key) const {
    if (!j_->contains(key)) fail(std::string(key) + ": required key missing");
    return fetch<T>(key);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("config: " + path_ + what);
  }

  const nlohmann::json& raw() const { return *j_; }
  const std::string& path() const { return path_; }

 private:
  template <typename T>
  T fetch(const char* key) const {
    try {
      return (*j_)[key].get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(std::string(key) + ": " + e.what());
    }
  }

  const nlohmann::json* j_;
  std::string path_;
};

DamperConfiguration config_array(const Cursor& c, const char* key) {
  DamperConfiguration out;
  for (const auto& v : c.raw()[key]) {
    if (!v.is_number_integer())
      c.fail(std::string(key) + ": expected integer link indices");
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

StudyConfig study_config_from_json(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw std::runtime_error("config: expected a JSON object");
  Cursor root(j, "");
  StudyConfig out;

  if (auto c = root.maybe_child("building")) {
    out.building.n_floors = c->get("n_floors", out.building.n_floors);
    out.building.storey_mass = c->get("storey_mass", out.building.storey_mass);
    out.building.storey_stiffness =
        c->get("storey_stiffness", out.building.storey_stiffness);
    out.building.damping_ratio =
        c->get("damping_ratio", out.building.damping_ratio);
    out.building.storey_height =
        c->get("storey_height", out.building.storey_height);
    out.building.building_gap =
        c->get("building_gap", out.building.building_gap);
  }

  if (auto c = root.maybe_child("damper")) {
    out.damper.k_d = c->get("k_d", out.damper.k_d);
    out.damper.c_d = c->get("c_d", out.damper.c_d);
    out.damper.dampers_per_link =
        c->get("dampers_per_link", out.damper.dampers_per_link);
  }

  if (auto c = root.maybe_child("model")) {
    const std::string projection = c->get<std::string>("diagonal_projection", "cos2");
    if (projection == "cos2")
      out.model.projection = DiagonalProjection::CosSquared;
    else if (projection == "unit")
      out.model.projection = DiagonalProjection::Unit;
    else
      c->fail("diagonal_projection: expected 'cos2' or 'unit'");
    out.model.include_damper_stiffness =
        c->get("include_damper_stiffness", out.model.include_damper_stiffness);
  }

  {
    Cursor c = root.child("ground_motion");
    out.ground_motion.path = c.require<std::string>("path");
    if (out.ground_motion.path.is_relative() && !base_dir.empty())
      out.ground_motion.path = base_dir / out.ground_motion.path;
    if (c.has("format")) {
      const auto fmt = c.require<std::string>("format");
      if (fmt == "csv")
        out.ground_motion.format = RecordFormat::TwoColumnCsv;
      else if (fmt == "at2")
        out.ground_motion.format = RecordFormat::PeerAt2;
      else
        c.fail("format: expected 'csv' or 'at2'");
    }
  }

  try {
    out.objective_set = objective_set_from_string(
        root.get<std::string>("objective_set", to_string(out.objective_set)));
  } catch (const std::invalid_argument& e) {
    root.fail(std::string("objective_set: ") + e.what());
  }
  out.n_dampers = root.get("n_dampers", out.n_dampers);

  if (auto c = root.maybe_child("solver")) {
    out.solver.beta = c->get("beta", out.solver.beta);
    out.solver.gamma = c->get("gamma", out.solver.gamma);
    if (c->has("dt") && !c->raw()["dt"].is_null())
      out.solver.dt = c->require<double>("dt");
  }

  if (auto c = root.maybe_child("metrics")) {
    out.metrics.absolute_acceleration =
        c->get("absolute_acceleration", out.metrics.absolute_acceleration);
  }

  auto read_algorithm = [](const Cursor& c, const char* key,
                           Algorithm fallback) {
    if (!c.has(key)) return fallback;
    try {
      return algorithm_from_string(c.require<std::string>(key));
    } catch (const std::invalid_argument& e) {
      c.fail(std::string(key) + ": " + e.what());
    }
  };

  if (auto c = root.maybe_child("moea")) {
    out.moea.algorithm = read_algorithm(*c, "algorithm", out.moea.algorithm);
    out.moea.population = c->get("population", out.moea.population);
    out.moea.iterations = c->get("iterations", out.moea.iterations);
    out.moea.p_c = c->get("p_c", out.moea.p_c);
    out.moea.eta_c = c->get("eta_c", out.moea.eta_c);
    out.moea.p_mut = c->get("p_mut", out.moea.p_mut);
    out.moea.eta_m = c->get("eta_m", out.moea.eta_m);
    out.moea.w = c->get("w", out.moea.w);
    out.moea.c1 = c->get("c1", out.moea.c1);
    out.moea.c2 = c->get("c2", out.moea.c2);
    out.moea.repository_capacity =
        c->get("repository_capacity", out.moea.repository_capacity);
    out.moea.grid_divisions =
        c->get("grid_divisions", out.moea.grid_divisions);
    out.moea.seed = c->get("seed", out.moea.seed);
  }

  if (auto c = root.maybe_child("benchmark")) {
    out.benchmark.base_seed = c->get("base_seed", out.benchmark.base_seed);
    if (c->has("rows")) {
      if (!c->raw()["rows"].is_array()) c->fail("rows: expected an array");
      int index = 0;
      for (const auto& row_json : c->raw()["rows"]) {
        Cursor rc(row_json, c->path() + "rows[" + std::to_string(index) + "].");
        BenchmarkRow row;
        row.algorithm = read_algorithm(rc, "algorithm", out.moea.algorithm);
        row.population = rc.get("population", out.moea.population);
        row.iterations = rc.get("iterations", out.moea.iterations);
        row.n_runs = rc.get("runs", row.n_runs);
        row.p_mut = rc.get("p_mut", row.p_mut);
        out.benchmark.rows.push_back(row);
        ++index;
      }
    }
  }

  if (root.has("simulate_configuration")) {
    if (!j["simulate_configuration"].is_array())
      root.fail("simulate_configuration: expected an array of link indices");
    out.simulate_configuration = config_array(root, "simulate_configuration");
  }

  return out;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: " + path.string() + ": " + e.what());
  }
  return study_config_from_json(j, path.parent_path());
}

nlohmann::json study_config_to_json(const StudyConfig& config) {
  nlohmann::json j;
  j["building"] = {{"n_floors", config.building.n_floors},
                   {"storey_mass", config.building.storey_mass},
                   {"storey_stiffness", config.building.storey_stiffness},
                   {"damping_ratio", config.building.damping_ratio},
                   {"storey_height", config.building.storey_height},
                   {"building_gap", config.building.building_gap}};
  j["damper"] = {{"k_d", config.damper.k_d},
                 {"c_d", config.damper.c_d},
                 {"dampers_per_link", config.damper.dampers_per_link}};
  j["model"] = {
      {"diagonal_projection",
       config.model.projection == DiagonalProjection::CosSquared ? "cos2"
                                                                 : "unit"},
      {"include_damper_stiffness", config.model.include_damper_stiffness}};
  j["ground_motion"] = {{"path", config.ground_motion.path.string()}};
  if (config.ground_motion.format)
    j["ground_motion"]["format"] =
        *config.ground_motion.format == RecordFormat::PeerAt2 ? "at2" : "csv";
  j["objective_set"] = to_string(config.objective_set);
  j["n_dampers"] = config.n_dampers;
  j["solver"] = {{"beta", config.solver.beta}, {"gamma", config.solver.gamma}};
  if (config.solver.dt) j["solver"]["dt"] = *config.solver.dt;
  j["metrics"] = {
      {"absolute_acceleration", config.metrics.absolute_acceleration}};
  j["moea"] = {{"algorithm", to_string(config.moea.algorithm)},
               {"population", config.moea.population},
               {"iterations", config.moea.iterations},
               {"p_c", config.moea.p_c},
               {"eta_c", config.moea.eta_c},
               {"p_mut", config.moea.p_mut},
               {"eta_m", config.moea.eta_m},
               {"w", config.moea.w},
               {"c1", config.moea.c1},
               {"c2", config.moea.c2},
               {"repository_capacity", config.moea.repository_capacity},
               {"grid_divisions", config.moea.grid_divisions},
               {"seed", config.moea.seed}};
  j["benchmark"] = {{"base_seed", config.benchmark.base_seed}};
  if (!config.benchmark.rows.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : config.benchmark.rows) {
      rows.push_back({{"algorithm", to_string(row.algorithm)},
                      {"population", row.population},
                      {"iterations", row.iterations},
                      {"runs", row.n_runs},
                      {"p_mut", row.p_mut}});
    }
    j["benchmark"]["rows"] = rows;
  }
  if (!config.simulate_configuration.empty())
    j["simulate_configuration"] = config.simulate_configuration;
  return j;
}

EvalContext make_eval_context(const StudyConfig& config) {
  EvalContext ctx;
  ctx.building = config.building;
  ctx.damper = config.damper;
  ctx.model = config.model;
  ctx.links = enumerate_positions(config.building.n_floors);
  ctx.record = load_record(config.ground_motion.path, config.ground_motion.format);
  if (config.solver.dt) ctx.record = resample(ctx.record, *config.solver.dt);
  ctx.newmark.beta = config.solver.beta;
  ctx.newmark.gamma = config.solver.gamma;
  ctx.metrics = config.metrics;
  return ctx;
}

Problem make_problem(const Evaluator& evaluator, ObjectiveSet set,
                     int n_dampers) {
  Problem problem;
  problem.n_positions = evaluator.n_positions();
  problem.n_dampers = n_dampers;
  problem.set = set;
  problem.objectives = [&evaluator, set](const DamperConfiguration& config) {
    const ObjectiveVector obj = evaluator.evaluate(config, set);
    return std::make_pair(obj.f1, obj.f2);
  };
  return problem;
}

nlohmann::json run_result_json(const RunResult& result, const MoeaConfig& cfg) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& point : result.points) {
    points.push_back(
        {{"config", point.config}, {"f1", point.f1}, {"f2", point.f2}});
  }
  return nlohmann::json{
      {"algorithm", result.algorithm},
      {"seed", result.seed},
      {"n_fe", result.n_fe},
      {"config",
       {{"population", cfg.population},
        {"iterations", cfg.iterations},
        {"p_c", cfg.p_c},
        {"eta_c", cfg.eta_c},
        {"p_mut", cfg.p_mut},
        {"eta_m", cfg.eta_m},
        {"w", cfg.w},
        {"c1", cfg.c1},
        {"c2", cfg.c2},
        {"repository_capacity", cfg.repository_capacity},
        {"grid_divisions", cfg.grid_divisions}}},
      {"points", points}};
}

nlohmann::json hit_matrix_json(const std::vector<BenchmarkReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& report : reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.hit_matrix) {
      nlohmann::json cells = nlohmann::json::array();
      for (const bool hit : row) cells.push_back(hit);
      rows.push_back(cells);
    }
    out.push_back({{"algorithm", report.algorithm},
                   {"population", report.population},
                   {"iterations", report.iterations},
                   {"runs", report.n_runs},
                   {"p_mut", report.p_mut},
                   {"ce", report.ce},
                   {"hits", report.hits},
                   {"hit_matrix", rows}});
  }
  return out;
}

std::string scatter_csv(const SolutionSpace& space) {
  std::ostringstream out;
  out << "f1,f2,config\n";
  for (const auto& [config, obj] : space.entries) {
    out << format_double(obj.f1) << ',' << format_double(obj.f2) << ','
        << configuration_label(config) << '\n';
  }
  return out.str();
}

std::string front_csv(const ParetoFront& front) {
  std::ostringstream out;
  out << "f1,f2,config,front_index\n";
  for (std::size_t k = 0; k < front.points.size(); ++k) {
    const auto& point = front.points[k];
    for (const auto& config : point.configs) {
      out << format_double(point.objectives.f1) << ','
          << format_double(point.objectives.f2) << ','
          << configuration_label(config) << ',' << (k + 1) << '\n';
    }
  }
  return out.str();
}

ParetoFront front_from_csv(const std::string& text, ObjectiveSet set) {
  ParetoFront front;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  std::size_t last_index = 0;
  while (std::getline(in, line)) {
    if (first) {
      first = false;  // header
      continue;
    }
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    std::string f1_text, f2_text, config_text, index_text;
    if (!std::getline(fields, f1_text, ',') ||
        !std::getline(fields, f2_text, ',') ||
        !std::getline(fields, config_text, ',') ||
        !std::getline(fields, index_text))
      throw std::runtime_error("front CSV: malformed row: " + line);
    const std::size_t index = std::stoull(index_text);
    if (index != last_index) {
      ParetoPoint point;
      point.objectives = {std::stod(f1_text), std::stod(f2_text), set};
      front.points.push_back(std::move(point));
      last_index = index;
    }
    front.points.back().configs.push_back(configuration_from_label(config_text));
  }
  if (front.points.empty()) throw std::runtime_error("front CSV: no rows");
  return front;
}

}  // namespace dsab
