#include "csvto/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace csvto {

namespace {

using OrderedJson = nlohmann::ordered_json;

ObstacleVariant variant_from_name(const std::string& problem) {
  if (problem == "quadrotor-none") return ObstacleVariant::kNone;
  if (problem == "quadrotor-static") return ObstacleVariant::kStatic;
  if (problem == "quadrotor-dynamic") return ObstacleVariant::kDynamic;
  throw std::runtime_error("unknown quadrotor variant in problem name: " + problem);
}

bool is_quadrotor(const std::string& problem) {
  return problem.rfind("quadrotor-", 0) == 0;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

OrderedJson config_echo(const Config& config) {
  OrderedJson echo = OrderedJson::object();
  for (const auto& section : config.sections()) {
    OrderedJson sec = OrderedJson::object();
    for (const auto& entry : section.entries) sec[entry.key] = entry.value;
    echo[section.name] = sec;
  }
  return echo;
}

OrderedJson violation_summary(const MpcTrace& trace,
                              const std::vector<std::string>& names) {
  OrderedJson out = OrderedJson::object();
  for (size_t m = 0; m < names.size(); ++m) {
    double total = 0.0;
    double peak = 0.0;
    for (const auto& step : trace.steps) {
      total += step.violations[m];
      peak = std::max(peak, step.violations[m]);
    }
    OrderedJson one;
    one["mean"] = trace.steps.empty() ? 0.0 : total / trace.steps.size();
    one["max"] = peak;
    out[names[m]] = one;
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

ExperimentConfig load_experiment(const Config& config) {
  ExperimentConfig cfg;
  cfg.problem = config.get_string("problem", "name", cfg.problem);
  if (cfg.problem != "toy2d" && !is_quadrotor(cfg.problem))
    throw std::runtime_error("unknown problem name: " + cfg.problem);

  const std::string solver = config.get_string("experiment", "solver", "csvto");
  if (solver == "csvto")
    cfg.solver = SolverKind::kCsvto;
  else if (solver == "mppi")
    cfg.solver = SolverKind::kMppi;
  else
    throw std::runtime_error("unknown solver: " + solver);

  cfg.quad_params.dt = config.get_double("problem", "dt", cfg.quad_params.dt);
  cfg.gamma_lik = config.get_double("problem", "gamma_lik", cfg.gamma_lik);

  SolverConfig& s = cfg.solver_cfg;
  s.num_particles = config.get_int("solver", "num_particles", s.num_particles);
  s.alpha_j = config.get_double("solver", "alpha_j", s.alpha_j);
  s.alpha_c = config.get_double("solver", "alpha_c", s.alpha_c);
  s.warm_iters = config.get_int("solver", "warm_iters", s.warm_iters);
  s.online_iters = config.get_int("solver", "online_iters", s.online_iters);
  s.resample_steps = config.get_int("solver", "resample_steps", s.resample_steps);
  s.beta = config.get_double("solver", "beta", s.beta);
  s.sigma_resample = config.get_double("solver", "sigma_resample", s.sigma_resample);
  s.lambda = config.get_double("solver", "lambda", s.lambda);
  s.window = config.get_int("solver", "window", s.window);
  s.anneal = config.get_bool("solver", "anneal", s.anneal);
  s.svd_cutoff = config.get_double("solver", "svd_cutoff", s.svd_cutoff);

  MppiConfig& b = cfg.mppi_cfg;
  b.num_samples = config.get_int("baseline", "num_samples", b.num_samples);
  b.temperature = config.get_double("baseline", "temperature", b.temperature);
  b.lambda_pen = config.get_double("baseline", "lambda", b.lambda_pen);
  b.mu_pen = config.get_double("baseline", "mu", b.mu_pen);
  b.warm_iters = config.get_int("baseline", "warm_iters", b.warm_iters);
  b.online_iters = config.get_int("baseline", "online_iters", b.online_iters);

  cfg.trials = config.get_int("experiment", "trials", cfg.trials);
  cfg.total_steps = config.get_int("experiment", "total_steps", cfg.total_steps);
  cfg.solve_iters = config.get_int("experiment", "solve_iters", cfg.solve_iters);
  cfg.resample_after_solve =
      config.get_bool("experiment", "resample_after_solve", cfg.resample_after_solve);
  cfg.post_resample_iters =
      config.get_int("experiment", "post_resample_iters", cfg.post_resample_iters);
  cfg.toy_init_sigma = config.get_double("experiment", "init_sigma", cfg.toy_init_sigma);
  cfg.seed = static_cast<std::uint64_t>(config.get_int64("experiment", "seed", 0));

  config.require_all_consumed();
  return cfg;
}

TraceSchema schema_of(const ProblemDef& problem) {
  TraceSchema schema;
  schema.state_dim = problem.state_dim;
  schema.control_dim = problem.control_dim;
  for (int i = 0; i < problem.state_dim; ++i)
    schema.state_names.push_back(i < static_cast<int>(problem.state_names.size())
                                     ? problem.state_names[i]
                                     : "s" + std::to_string(i));
  for (int i = 0; i < problem.control_dim; ++i)
    schema.control_names.push_back(i < static_cast<int>(problem.control_names.size())
                                       ? problem.control_names[i]
                                       : "u" + std::to_string(i));
  for (const auto& monitor : problem.monitors)
    schema.monitor_names.push_back(monitor.name);
  return schema;
}

TrialResult run_mpc_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (!is_quadrotor(cfg.problem))
    throw std::runtime_error("mpc requires a quadrotor problem; '" + cfg.problem +
                             "' has no environment to step");
  QuadrotorBenchmark bench =
      make_quadrotor(cfg.quad_params, variant_from_name(cfg.problem), seed);
  if (cfg.gamma_lik > 0.0) bench.problem.gamma_lik = cfg.gamma_lik;

  TrialResult result;
  result.seed = seed;
  result.schema = schema_of(bench.problem);

  if (cfg.solver == SolverKind::kCsvto) {
    SolverConfig sc = cfg.solver_cfg;
    sc.seed = seed;
    result.trace = mpc_run(*bench.env, bench.problem, sc, cfg.total_steps);
  } else {
    MppiConfig mc = cfg.mppi_cfg;
    mc.seed = seed;
    result.trace = mppi_mpc_run(*bench.env, bench.problem, mc, cfg.total_steps);
  }

  result.failed = result.trace.failed;
  result.failure = result.trace.failure;
  const Vec final_state =
      result.trace.steps.empty() ? bench.start : result.trace.steps.back().state;
  result.final_distance = quadrotor_goal_distance(final_state, bench.goal);
  result.success = !result.failed && result.final_distance < bench.goal_threshold;
  for (const auto& step : result.trace.steps) result.total_wall_ms += step.wall_ms;
  return result;
}

ToyRunResult run_toy(const ExperimentConfig& cfg, std::uint64_t seed) {
  ProblemDef problem = make_toy2d();
  if (cfg.gamma_lik > 0.0) problem.gamma_lik = cfg.gamma_lik;
  SolverConfig sc = cfg.solver_cfg;
  sc.seed = seed;

  Rng rng(seed);
  std::vector<TrajectoryParticle> init(sc.num_particles);
  for (auto& p : init) {
    p.states = rng.normal_mat(1, 2, cfg.toy_init_sigma);
    p.controls.resize(1, 0);
  }

  ToyRunResult out;
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult res = solve(problem, problem.x0, init, cfg.solve_iters, sc.anneal, sc);

  if (cfg.resample_after_solve) {
    out.resampled = true;
    ResampleResult rr =
        resample(problem, res.particles, sc.beta, sc.sigma_resample, sc.lambda, rng,
                 sc.svd_cutoff);
    out.resample_fallback = rr.uniform_fallback;
    std::vector<TrajectoryParticle> trajectories;
    trajectories.reserve(rr.particles.size());
    for (const auto& p : rr.particles) trajectories.push_back(p.particle);
    res = solve(problem, problem.x0, trajectories, cfg.post_resample_iters, false, sc);
  }
  out.total_wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();

  for (const auto& p : res.particles) {
    const Vec point = p.particle.states.row(0);
    out.max_abs_h =
        std::max(out.max_abs_h, std::abs(problem.equality.values(p.particle)[0]));
    out.max_g_violation =
        std::max(out.max_g_violation, problem.inequality.values(p.particle)[0]);
    double deg = std::atan2(point[1], point[0]) * 180.0 / M_PI;
    if (deg < 0) deg += 360.0;
    out.angles.push_back(deg);
  }
  out.final_state = std::move(res);
  return out;
}

void write_trace_csv(const std::string& path, const TraceSchema& schema,
                     const MpcTrace& trace, bool deterministic_trace) {
  std::string csv = "step";
  for (const auto& name : schema.state_names) csv += "," + name;
  for (const auto& name : schema.control_names) csv += "," + name;
  for (const auto& name : schema.monitor_names) csv += "," + name + "_violation";
  csv += ",wall_time_ms\n";

  for (const auto& step : trace.steps) {
    csv += std::to_string(step.step);
    for (int i = 0; i < schema.state_dim; ++i) csv += "," + format_double(step.state[i]);
    for (int i = 0; i < schema.control_dim; ++i)
      csv += "," + format_double(step.control[i]);
    for (double v : step.violations) csv += "," + format_double(v);
    csv += "," + format_double(deterministic_trace ? 0.0 : step.wall_ms);
    csv += "\n";
  }
  write_text(path, csv);
}

void write_particles_csv(const std::string& path, const TraceSchema& schema,
                         const std::vector<AugmentedParticle>& particles) {
  std::string csv = "particle,step";
  for (const auto& name : schema.state_names) csv += "," + name;
  for (const auto& name : schema.control_names) csv += "," + name;
  csv += "\n";
  for (size_t n = 0; n < particles.size(); ++n) {
    const TrajectoryParticle& traj = particles[n].particle;
    for (int t = 0; t < traj.horizon(); ++t) {
      csv += std::to_string(n) + "," + std::to_string(t + 1);
      for (int i = 0; i < schema.state_dim; ++i)
        csv += "," + format_double(traj.states(t, i));
      for (int i = 0; i < schema.control_dim; ++i)
        csv += "," + format_double(traj.controls(t, i));
      csv += "\n";
    }
  }
  write_text(path, csv);
}

namespace {

OrderedJson trial_metrics(const ExperimentConfig& cfg, const TrialResult& trial) {
  OrderedJson m;
  m["problem"] = cfg.problem;
  m["solver"] = cfg.solver == SolverKind::kCsvto ? "csvto" : "mppi";
  m["seed"] = trial.seed;
  m["success"] = trial.success;
  m["final_distance"] = trial.final_distance;
  m["steps"] = trial.trace.steps.size();
  m["failed"] = trial.failed;
  if (trial.failed) m["failure"] = trial.failure;
  m["violations"] = violation_summary(trial.trace, trial.schema.monitor_names);
  m["total_wall_ms"] = trial.total_wall_ms;
  return m;
}

}  // namespace

int run_solve_command(const ExperimentConfig& cfg, const Config& echo,
                      const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  OrderedJson metrics;
  if (cfg.problem == "toy2d") {
    const ToyRunResult res = run_toy(cfg, cfg.seed);
    write_particles_csv(out_dir + "/particles.csv", schema_of(make_toy2d()),
                        res.final_state.particles);
    metrics["problem"] = cfg.problem;
    metrics["solver"] = "csvto";
    metrics["seed"] = cfg.seed;
    metrics["max_abs_h"] = res.max_abs_h;
    metrics["max_g_violation"] = std::max(res.max_g_violation, 0.0);
    metrics["resampled"] = res.resampled;
    metrics["best_index"] = res.final_state.best_index;
    metrics["best_cost"] = make_toy2d().cost(res.final_state.best.particle);
    metrics["angles_deg"] = res.angles;
    metrics["total_wall_ms"] = res.total_wall_ms;
  } else {
    QuadrotorBenchmark bench =
        make_quadrotor(cfg.quad_params, variant_from_name(cfg.problem), cfg.seed);
    if (cfg.gamma_lik > 0.0) bench.problem.gamma_lik = cfg.gamma_lik;
    SolverConfig sc = cfg.solver_cfg;
    sc.seed = cfg.seed;
    Rng rng(sc.seed);
    const auto init =
        init_particles(bench.problem, bench.start, sc.num_particles, rng, sc.init_sigma);
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult res =
        solve(bench.problem, bench.start, init, sc.warm_iters, sc.anneal, sc);
    const double wall = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    write_particles_csv(out_dir + "/particles.csv", schema_of(bench.problem),
                        res.particles);
    double max_h = 0.0;
    for (const auto& p : res.particles) {
      const ConstraintBundle bundle = eval_constraints(bench.problem, p);
      max_h = std::max(max_h, bundle.values.cwiseAbs().maxCoeff());
    }
    metrics["problem"] = cfg.problem;
    metrics["solver"] = "csvto";
    metrics["seed"] = cfg.seed;
    metrics["max_abs_h"] = max_h;
    metrics["best_index"] = res.best_index;
    metrics["best_cost"] = bench.problem.cost(res.best.particle);
    metrics["total_wall_ms"] = wall;
  }
  metrics["config"] = config_echo(echo);
  write_text(out_dir + "/metrics.json", metrics.dump(2) + "\n");
  return 0;
}

int run_mpc_command(const ExperimentConfig& cfg, const Config& echo,
                    const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const TrialResult trial = run_mpc_trial(cfg, cfg.seed);
  write_trace_csv(out_dir + "/trace.csv", trial.schema, trial.trace, false);
  OrderedJson metrics = trial_metrics(cfg, trial);
  metrics["config"] = config_echo(echo);
  write_text(out_dir + "/metrics.json", metrics.dump(2) + "\n");
  return trial.failed ? 2 : 0;
}

int run_bench_command(const ExperimentConfig& cfg, const Config& echo,
                      const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  OrderedJson summary;
  summary["problem"] = cfg.problem;
  summary["solver"] = cfg.solver == SolverKind::kCsvto ? "csvto" : "mppi";
  summary["trials"] = cfg.trials;

  if (cfg.problem == "toy2d") {
    int feasible_runs = 0;
    OrderedJson per_trial = OrderedJson::array();
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t seed = cfg.seed + trial;
      const ToyRunResult res = run_toy(cfg, seed);
      const std::string dir = out_dir + "/seed_" + std::to_string(seed);
      std::filesystem::create_directories(dir);
      write_particles_csv(dir + "/particles.csv", schema_of(make_toy2d()),
                          res.final_state.particles);
      OrderedJson m;
      m["seed"] = seed;
      m["max_abs_h"] = res.max_abs_h;
      m["max_g_violation"] = std::max(res.max_g_violation, 0.0);
      per_trial.push_back(m);
      if (res.max_abs_h < 1e-2) ++feasible_runs;
    }
    summary["feasible_runs"] = feasible_runs;
    summary["per_trial"] = per_trial;
  } else {
    int successes = 0;
    OrderedJson per_trial = OrderedJson::array();
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t seed = cfg.seed + trial;
      const TrialResult result = run_mpc_trial(cfg, seed);
      const std::string dir = out_dir + "/seed_" + std::to_string(seed);
      std::filesystem::create_directories(dir);
      write_trace_csv(dir + "/trace.csv", result.schema, result.trace, true);
      OrderedJson m = trial_metrics(cfg, result);
      write_text(dir + "/metrics.json", m.dump(2) + "\n");
      per_trial.push_back(m);
      if (result.success) ++successes;
    }
    summary["success_rate"] =
        cfg.trials > 0 ? static_cast<double>(successes) / cfg.trials : 0.0;
    summary["per_trial"] = per_trial;
  }
  summary["config"] = config_echo(echo);
  write_text(out_dir + "/metrics.json", summary.dump(2) + "\n");
  return 0;
}

}  // namespace csvto
