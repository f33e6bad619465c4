// Command-line front end: simulate | enumerate | optimize | benchmark.
// All numeric output is byte-stable for a fixed config and seed, for any
// --jobs value.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "dsab/bench.hpp"
#include "dsab/enumeration.hpp"
#include "dsab/io_util.hpp"
#include "dsab/moea.hpp"
#include "dsab/parallel.hpp"
#include "dsab/study.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  unsigned jobs = dsab::default_jobs();
  bool emit_effective_config = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Study config file (JSON)")
      ->required();
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Override the MOEA base seed");
  cmd->add_option("--jobs", opts.jobs, "Parallel evaluation workers");
  cmd->add_flag("--emit-effective-config", opts.emit_effective_config,
                "Write the fully resolved config into the output directory");
}

dsab::StudyConfig load_config(const CommonOptions& opts) {
  dsab::StudyConfig config = dsab::load_study_config(opts.config_path);
  if (opts.seed) config.moea.seed = *opts.seed;
  return config;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

void prepare_out_dir(const CommonOptions& opts, const dsab::StudyConfig& config) {
  fs::create_directories(opts.out_dir);
  if (opts.emit_effective_config) {
    write_file(fs::path(opts.out_dir) / "effective-config.json",
               dsab::study_config_to_json(config).dump(2) + "\n");
  }
}

std::string top_displacement_csv(const dsab::ResponseHistory& history,
                                 int n_floors) {
  std::ostringstream out;
  out << "t,x_top_left,x_top_right\n";
  for (Eigen::Index i = 0; i < history.steps(); ++i) {
    out << dsab::format_double(static_cast<double>(i) * history.dt) << ','
        << dsab::format_double(history.rel_disp(i, n_floors - 1)) << ','
        << dsab::format_double(history.rel_disp(i, 2 * n_floors - 1)) << '\n';
  }
  return out.str();
}

std::string history_csv(const Eigen::MatrixXd& values, double dt) {
  std::ostringstream out;
  out << "t";
  for (Eigen::Index c = 0; c < values.cols(); ++c) out << ",x_" << (c + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out << dsab::format_double(static_cast<double>(i) * dt);
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      out << ',' << dsab::format_double(values(i, c));
    out << '\n';
  }
  return out.str();
}

int cmd_simulate(const CommonOptions& opts,
                 const std::string& dampers_override,
                 const std::vector<std::string>& dump) {
  dsab::StudyConfig config = load_config(opts);
  prepare_out_dir(opts, config);
  const dsab::EvalContext ctx = dsab::make_eval_context(config);
  const int n_floors = config.building.n_floors;

  dsab::DamperConfiguration damped_config = config.simulate_configuration;
  if (!dampers_override.empty())
    damped_config = dsab::configuration_from_label(dampers_override);

  auto solve = [&](const dsab::DamperConfiguration& damper_config) {
    const dsab::CoupledSystem sys = dsab::assemble_system(
        config.building, config.damper, damper_config, ctx.links, config.model);
    return dsab::newmark_solve(sys, ctx.record, ctx.newmark);
  };

  const auto dump_history = [&](const dsab::ResponseHistory& h,
                                const std::string& tag) {
    for (const std::string& quantity : dump) {
      const Eigen::MatrixXd* values = nullptr;
      if (quantity == "disp") values = &h.rel_disp;
      else if (quantity == "vel") values = &h.rel_vel;
      else if (quantity == "acc") values = &h.rel_acc;
      else if (quantity == "absacc") values = &h.abs_acc;
      else throw std::runtime_error("unknown dump quantity '" + quantity +
                                    "' (expected disp, vel, acc or absacc)");
      write_file(fs::path(opts.out_dir) / (tag + "_" + quantity + ".csv"),
                 history_csv(*values, h.dt));
    }
  };

  const dsab::ResponseHistory undamped = solve({});
  write_file(fs::path(opts.out_dir) / "top_disp_undamped.csv",
             top_displacement_csv(undamped, n_floors));
  dump_history(undamped, "undamped");
  const auto [ul, ur] = dsab::top_floor_displacements(undamped, n_floors);
  std::cout << "undamped peak top displacement: left "
            << dsab::format_double(ul) << " m, right "
            << dsab::format_double(ur) << " m\n";

  if (!damped_config.empty()) {
    const dsab::ResponseHistory damped = solve(damped_config);
    write_file(fs::path(opts.out_dir) / "top_disp_damped.csv",
               top_displacement_csv(damped, n_floors));
    dump_history(damped, "damped");
    const auto [dl, dr] = dsab::top_floor_displacements(damped, n_floors);
    std::cout << "damped (" << dsab::configuration_label(damped_config)
              << ") peak top displacement: left " << dsab::format_double(dl)
              << " m, right " << dsab::format_double(dr) << " m\n";
  }
  return 0;
}

int cmd_enumerate(const CommonOptions& opts) {
  dsab::StudyConfig config = load_config(opts);
  prepare_out_dir(opts, config);
  const dsab::Evaluator evaluator(dsab::make_eval_context(config));

  dsab::ExhaustiveOptions exhaustive;
  exhaustive.jobs = opts.jobs;
  const dsab::ExhaustiveResult result = dsab::exhaustive_front(
      evaluator, config.objective_set, config.n_dampers, exhaustive);

  write_file(fs::path(opts.out_dir) / "scatter.csv",
             dsab::scatter_csv(result.space));
  write_file(fs::path(opts.out_dir) / "front.csv",
             dsab::front_csv(result.front));

  std::ostringstream timing;
  timing << "evaluations: " << result.space.entries.size() << '\n'
         << "wall_seconds: " << result.wall_seconds << '\n'
         << "mean_eval_ms: " << result.mean_eval_ms << '\n';
  write_file(fs::path(opts.out_dir) / "timing.txt", timing.str());

  std::cout << "evaluated " << result.space.entries.size()
            << " configurations in " << result.wall_seconds << " s ("
            << result.mean_eval_ms << " ms per evaluation)\n"
            << "front size: " << result.front.points.size() << '\n';
  return 0;
}

int cmd_optimize(const CommonOptions& opts) {
  dsab::StudyConfig config = load_config(opts);
  prepare_out_dir(opts, config);
  const dsab::Evaluator evaluator(dsab::make_eval_context(config));
  const dsab::Problem problem =
      dsab::make_problem(evaluator, config.objective_set, config.n_dampers);

  const dsab::RunResult result =
      dsab::run_moea(config.moea, problem, opts.jobs);

  fs::create_directories(fs::path(opts.out_dir) / "runs");
  const std::string file_name = std::string("run-") + result.algorithm +
                                "-seed" + std::to_string(result.seed) + ".json";
  write_file(fs::path(opts.out_dir) / "runs" / file_name,
             dsab::run_result_json(result, config.moea).dump(2) + "\n");

  std::cout << result.algorithm << " seed " << result.seed << ": "
            << result.points.size() << " nondominated points, n_fe "
            << result.n_fe << '\n';
  for (const auto& point : result.points) {
    std::cout << "  " << dsab::configuration_label(point.config) << "  f1 "
              << dsab::format_double(point.f1) << "  f2 "
              << dsab::format_double(point.f2) << '\n';
  }
  return 0;
}

int cmd_benchmark(const CommonOptions& opts, const std::string& front_path,
                  bool no_enumerate) {
  dsab::StudyConfig config = load_config(opts);
  prepare_out_dir(opts, config);
  const dsab::Evaluator evaluator(dsab::make_eval_context(config));
  const dsab::Problem problem =
      dsab::make_problem(evaluator, config.objective_set, config.n_dampers);
  const std::uint64_t space_size = dsab::count_configurations(
      evaluator.n_positions(), config.n_dampers);

  dsab::ParetoFront oracle;
  if (!front_path.empty()) {
    std::ifstream in(front_path);
    if (!in) throw std::runtime_error("cannot open front file: " + front_path);
    std::ostringstream text;
    text << in.rdbuf();
    oracle = dsab::front_from_csv(text.str(), config.objective_set);
  } else if (no_enumerate) {
    throw std::runtime_error(
        "benchmark needs an oracle front: drop --no-enumerate to compute it "
        "by exhaustive search, or pass --front FRONT.csv from a previous "
        "`enumerate` run");
  } else {
    dsab::ExhaustiveOptions exhaustive;
    exhaustive.jobs = opts.jobs;
    dsab::ExhaustiveResult result = dsab::exhaustive_front(
        evaluator, config.objective_set, config.n_dampers, exhaustive);
    oracle = std::move(result.front);
    write_file(fs::path(opts.out_dir) / "front.csv", dsab::front_csv(oracle));
  }

  std::vector<dsab::BenchmarkRow> rows = config.benchmark.rows;
  if (rows.empty()) {
    rows.push_back({config.moea.algorithm, config.moea.population,
                    config.moea.iterations, 30, config.moea.p_mut});
  }

  std::vector<dsab::BenchmarkReport> reports;
  for (const auto& row : rows) {
    dsab::MoeaConfig cfg = config.moea;
    cfg.algorithm = row.algorithm;
    cfg.population = row.population;
    cfg.iterations = row.iterations;
    cfg.p_mut = row.p_mut;
    cfg.seed = config.benchmark.base_seed;
    if (opts.seed) cfg.seed = *opts.seed;
    reports.push_back(dsab::run_benchmark(cfg, problem, row.n_runs, oracle,
                                          space_size, opts.jobs));
  }

  const std::string text = dsab::benchmark_table_text(reports);
  write_file(fs::path(opts.out_dir) / "benchmark.csv",
             dsab::benchmark_table_csv(reports));
  write_file(fs::path(opts.out_dir) / "benchmark.txt", text);
  write_file(fs::path(opts.out_dir) / "hits.json",
             dsab::hit_matrix_json(reports).dump(2) + "\n");
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Seismic response and Pareto-optimal damper placement for coupled "
      "adjacent shear buildings"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string dampers_override;
  std::vector<std::string> dump;
  std::string front_path;
  bool no_enumerate = false;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Time-history run; writes top-floor displacement CSVs");
  add_common(simulate, opts);
  simulate->add_option("--dampers", dampers_override,
                       "Damper configuration 'd1-d2-...' for the damped run");
  simulate->add_option("--dump", dump,
                       "Full history dump: disp, vel, acc and/or absacc");

  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "Exhaustive search; writes scatter.csv and front.csv");
  add_common(enumerate, opts);

  CLI::App* optimize =
      app.add_subcommand("optimize", "One MOEA run; writes runs/*.json");
  add_common(optimize, opts);

  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "Seeded MOEA trials against the exhaustive oracle");
  add_common(benchmark, opts);
  benchmark->add_option("--front", front_path,
                        "Reuse an oracle front.csv instead of enumerating");
  benchmark->add_flag("--no-enumerate", no_enumerate,
                      "Fail instead of computing a missing oracle");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(opts, dampers_override, dump);
    if (enumerate->parsed()) return cmd_enumerate(opts);
    if (optimize->parsed()) return cmd_optimize(opts);
    if (benchmark->parsed()) return cmd_benchmark(opts, front_path, no_enumerate);
  } catch (const std::exception& e) {
    std::cerr << "dsab: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
