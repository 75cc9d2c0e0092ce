#include "csvto/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::int64_t seed = -1;  // < 0 means "use the config's seed"
  std::string problem;
  std::string solver;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config file")->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "RNG seed (overrides the config)");
  cmd->add_option("--problem", args.problem,
                  "toy2d|quadrotor-none|quadrotor-static|quadrotor-dynamic "
                  "(overrides the config)");
  cmd->add_option("--solver", args.solver, "csvto|mppi (overrides the config)");
}

int run(const CommonArgs& args, const std::string& subcommand) {
  const csvto::Config raw = csvto::Config::parse_file(args.config_path);
  csvto::ExperimentConfig cfg = csvto::load_experiment(raw);
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (!args.problem.empty()) cfg.problem = args.problem;
  if (!args.solver.empty()) {
    if (args.solver == "csvto")
      cfg.solver = csvto::SolverKind::kCsvto;
    else if (args.solver == "mppi")
      cfg.solver = csvto::SolverKind::kMppi;
    else
      throw std::runtime_error("unknown solver: " + args.solver);
  }

  if (subcommand == "solve") return csvto::run_solve_command(cfg, raw, args.out_dir);
  if (subcommand == "mpc") return csvto::run_mpc_command(cfg, raw, args.out_dir);
  return csvto::run_bench_command(cfg, raw, args.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained Stein variational trajectory optimization"};
  app.require_subcommand(1);

  CommonArgs solve_args, mpc_args, bench_args;
  CLI::App* solve = app.add_subcommand("solve", "single warm-start solve, emits the particle set");
  add_common(solve, solve_args);
  CLI::App* mpc = app.add_subcommand("mpc", "receding-horizon run with online replanning");
  add_common(mpc, mpc_args);
  CLI::App* bench = app.add_subcommand("bench", "multi-seed aggregate run");
  add_common(bench, bench_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run(solve_args, "solve");
    if (mpc->parsed()) return run(mpc_args, "mpc");
    return run(bench_args, "bench");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
