#include "csvto/mppi.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace csvto {

void MppiConfig::validate() const {
  if (num_samples < 1) throw std::invalid_argument("mppi: num_samples must be >= 1");
  if (temperature <= 0.0) throw std::invalid_argument("mppi: temperature must be > 0");
  if (lambda_pen < 0.0 || mu_pen < 0.0)
    throw std::invalid_argument("mppi: penalty weights must be >= 0");
  if (warm_iters < 1 || online_iters < 1)
    throw std::invalid_argument("mppi: iteration counts must be >= 1");
}

double penalty_cost(const ProblemDef& problem, const TrajectoryParticle& trajectory,
                    double lambda_pen, double mu_pen) {
  double total = problem.cost(trajectory);
  if (problem.equality.rows > 0)
    total += lambda_pen * problem.equality.values(trajectory).array().abs().sum();
  if (problem.inequality.rows > 0)
    total += mu_pen * problem.inequality.values(trajectory).array().max(0.0).sum();
  return total;
}

MppiStepResult mppi_step(const Mat& nominal_controls, const ProblemDef& problem,
                         const MppiConfig& cfg, Rng& rng) {
  cfg.validate();
  if (!problem.has_dynamics()) throw std::invalid_argument("mppi_step: dynamics required");
  const int horizon = static_cast<int>(nominal_controls.rows());
  const int du = problem.control_dim;

  Vec sigma = cfg.noise_sigma;
  if (sigma.size() == 0) {
    if (problem.init_control_sigma.size() > 0)
      sigma = problem.init_control_sigma;
    else if (problem.control_prior_sigma.size() > 0)
      sigma = problem.control_prior_sigma;
    else
      sigma = Vec::Ones(du);
  }
  if (sigma.size() != du) throw std::invalid_argument("mppi_step: noise_sigma dimension");

  std::vector<Mat> samples(cfg.num_samples);
  std::vector<TrajectoryParticle> rollouts(cfg.num_samples);
  Vec penalties(cfg.num_samples);
  for (int s = 0; s < cfg.num_samples; ++s) {
    Mat controls = nominal_controls;
    for (int t = 0; t < horizon; ++t)
      for (int c = 0; c < du; ++c) controls(t, c) += sigma[c] * rng.normal();
    for (int t = 0; t < horizon; ++t)
      controls.row(t) = controls.row(t)
                            .cwiseMax(problem.bounds.u_min.transpose())
                            .cwiseMin(problem.bounds.u_max.transpose());
    TrajectoryParticle traj;
    traj.controls = controls;
    traj.states = rollout_dynamics(problem.x0, controls, problem.dynamics);
    penalties[s] = penalty_cost(problem, traj, cfg.lambda_pen, cfg.mu_pen);
    samples[s] = std::move(controls);
    rollouts[s] = std::move(traj);
  }

  double min_pen = std::numeric_limits<double>::infinity();
  int best = 0;
  for (int s = 0; s < cfg.num_samples; ++s) {
    if (std::isfinite(penalties[s]) && penalties[s] < min_pen) {
      min_pen = penalties[s];
      best = s;
    }
  }

  Vec weights = Vec::Zero(cfg.num_samples);
  double total = 0.0;
  if (std::isfinite(min_pen)) {
    for (int s = 0; s < cfg.num_samples; ++s) {
      if (!std::isfinite(penalties[s])) continue;
      weights[s] = std::exp(-(penalties[s] - min_pen) / cfg.temperature);
      total += weights[s];
    }
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    weights.setConstant(1.0 / cfg.num_samples);  // all-non-finite fallback
  } else {
    weights /= total;
  }

  MppiStepResult result;
  result.controls = Mat::Zero(horizon, du);
  for (int s = 0; s < cfg.num_samples; ++s)
    result.controls += weights[s] * samples[s];
  result.best_rollout = rollouts[best];
  result.best_cost = penalties[best];
  return result;
}

MpcTrace mppi_mpc_run(Env& env, const ProblemDef& problem, const MppiConfig& cfg,
                      int total_steps) {
  cfg.validate();
  if (total_steps < 1) throw std::invalid_argument("mppi_mpc_run: total_steps must be >= 1");

  MpcTrace trace;
  Rng rng(cfg.seed);
  ProblemDef prob = problem;
  Mat nominal = Mat::Zero(prob.horizon, prob.control_dim);
  if (prob.init_control_mean.size() > 0)
    nominal.rowwise() = prob.init_control_mean.transpose();

  for (int t = 1; t <= total_steps; ++t) {
    prob.x0 = env.state();
    env.begin_plan();
    const auto t_start = std::chrono::steady_clock::now();
    const int iters = (t == 1) ? cfg.warm_iters : cfg.online_iters;
    MppiStepResult step{};
    for (int k = 0; k < iters; ++k) {
      step = mppi_step(nominal, prob, cfg, rng);
      nominal = step.controls;
    }
    const auto t_end = std::chrono::steady_clock::now();

    MpcStepRecord rec;
    rec.step = t;
    rec.control = nominal.row(0);
    rec.wall_ms = std::chrono::duration<double, std::milli>(t_end - t_start).count();

    const bool ok = env.step(rec.control);
    rec.state = env.state();
    rec.violations.reserve(prob.monitors.size());
    for (const auto& monitor : prob.monitors)
      rec.violations.push_back(monitor.violation(rec.state));
    trace.steps.push_back(std::move(rec));

    if (!ok) {
      trace.failed = true;
      trace.failure = env.failure_reason();
      break;
    }

    nominal.topRows(prob.horizon - 1) = nominal.bottomRows(prob.horizon - 1).eval();
  }
  return trace;
}

}  // namespace csvto
