#pragma once

#include "csvto/benchmarks.hpp"
#include "csvto/config.hpp"
#include "csvto/mppi.hpp"
#include "csvto/solver.hpp"

#include <cstdint>
#include <string>

namespace csvto {

enum class SolverKind { kCsvto, kMppi };

/// Everything one experiment run needs, assembled from a config file plus
/// command-line overrides.
struct ExperimentConfig {
  std::string problem = "toy2d";  // toy2d | quadrotor-none | quadrotor-static |
                                  // quadrotor-dynamic
  SolverKind solver = SolverKind::kCsvto;
  SolverConfig solver_cfg;
  MppiConfig mppi_cfg;
  QuadrotorParams quad_params;
  double gamma_lik = 0.0;  // <= 0 keeps the problem's own default

  int trials = 1;
  int total_steps = 100;  // MPC steps per trial

  // Workflow of the single-solve (toy-style) experiment: warm solve, one
  // resampling pass, short polish.
  int solve_iters = 500;
  bool resample_after_solve = true;
  int post_resample_iters = 100;
  double toy_init_sigma = 2.0;

  std::uint64_t seed = 0;
};

ExperimentConfig load_experiment(const Config& config);

/// Column layout of trace/particle files, detached from the live problem.
struct TraceSchema {
  int state_dim = 0;
  int control_dim = 0;
  std::vector<std::string> state_names;
  std::vector<std::string> control_names;
  std::vector<std::string> monitor_names;
};

TraceSchema schema_of(const ProblemDef& problem);

struct TrialResult {
  std::uint64_t seed = 0;
  bool success = false;
  double final_distance = 0.0;
  bool failed = false;
  std::string failure;
  MpcTrace trace;
  TraceSchema schema;
  double total_wall_ms = 0.0;
};

/// One MPC trial (CSVTO or the MPPI baseline) on a quadrotor variant.
TrialResult run_mpc_trial(const ExperimentConfig& cfg, std::uint64_t seed);

struct ToyRunResult {
  SolveResult final_state;
  double max_abs_h = 0.0;
  double max_g_violation = 0.0;
  bool resampled = false;
  bool resample_fallback = false;
  std::vector<double> angles;  // particle angle on the circle, degrees in [0, 360)
  double total_wall_ms = 0.0;
};

/// Constrained-sampling workflow on the 2D toy problem: annealed solve,
/// optional resampling pass, polish.
ToyRunResult run_toy(const ExperimentConfig& cfg, std::uint64_t seed);

/// Subcommand entry points; each writes its artifacts under out_dir and
/// returns a process exit code. `deterministic_trace` zeroes the wall-time
/// column of trace files so repeated runs are byte-identical.
int run_solve_command(const ExperimentConfig& cfg, const Config& echo,
                      const std::string& out_dir);
int run_mpc_command(const ExperimentConfig& cfg, const Config& echo,
                    const std::string& out_dir);
int run_bench_command(const ExperimentConfig& cfg, const Config& echo,
                      const std::string& out_dir);

/// trace.csv schema: step, states, controls, one column per named constraint
/// violation, wall_time_ms. The column order is part of the interface.
void write_trace_csv(const std::string& path, const TraceSchema& schema,
                     const MpcTrace& trace, bool deterministic_trace);

void write_particles_csv(const std::string& path, const TraceSchema& schema,
                         const std::vector<AugmentedParticle>& particles);

}  // namespace csvto
