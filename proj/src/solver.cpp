#include "csvto/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace csvto {

void SolverConfig::validate() const {
  if (num_particles < 1) throw std::invalid_argument("config: num_particles must be >= 1");
  if (alpha_j <= 0.0 || alpha_c <= 0.0)
    throw std::invalid_argument("config: step sizes must be > 0");
  if (warm_iters < 1 || online_iters < 1)
    throw std::invalid_argument("config: iteration counts must be >= 1");
  if (resample_steps < 1) throw std::invalid_argument("config: resample_steps must be >= 1");
  if (beta <= 0.0) throw std::invalid_argument("config: beta must be > 0");
  if (sigma_resample < 0.0) throw std::invalid_argument("config: sigma_resample must be >= 0");
  if (lambda < 0.0) throw std::invalid_argument("config: lambda must be >= 0");
  if (window < 1) throw std::invalid_argument("config: window must be >= 1");
  if (svd_cutoff <= 0.0) throw std::invalid_argument("config: svd_cutoff must be > 0");
}

std::vector<ParticleState> prepare_particles(
    const ProblemDef& problem, const std::vector<AugmentedParticle>& particles,
    double lambda, double svd_cutoff) {
  const int n = static_cast<int>(particles.size());
  std::vector<ParticleState> states(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    ParticleState& ps = states[i];
    ps.particle = particles[i];
    ps.finite = particles[i].particle.all_finite() && particles[i].slack.allFinite();
    if (!ps.finite) {
      ps.cost = std::numeric_limits<double>::quiet_NaN();
      ps.penalty = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    ps.bundle = eval_constraints(problem, particles[i]);
    ps.proj = projection_matrix(ps.bundle.jacobian, svd_cutoff);
    ps.dp_colsum = projection_derivative_colsum(ps.proj, ps.bundle.hessians);
    Vec glp = problem.log_posterior_gradient(particles[i].particle);
    ps.posterior_grad_aug = Vec::Zero(problem.num_aug());
    ps.posterior_grad_aug.head(problem.num_tau()) = glp;
    ps.cost = problem.cost(particles[i].particle);
    ps.penalty = augmented_penalty(problem, particles[i], lambda, ps.bundle);
  }
  return states;
}

std::vector<Vec> stein_direction(const ProblemDef& problem,
                                 const std::vector<ParticleState>& states,
                                 const TrajectoryKernel& kernel, double gamma_anneal) {
  const int n = static_cast<int>(states.size());
  if (n == 0) throw std::invalid_argument("stein_direction: empty particle set");
  const int n_tau = problem.num_tau();
  const int n_aug = problem.num_aug();

  for (int j = 0; j < n; ++j)
    if (states[j].finite && !states[j].posterior_grad_aug.allFinite())
      throw std::runtime_error("stein_direction: non-finite posterior gradient at particle " +
                               std::to_string(j));

  // Per-source terms that do not depend on the receiving particle.
  std::vector<Vec> driven(n);
  for (int j = 0; j < n; ++j)
    if (states[j].finite)
      driven[j] = states[j].proj.P * states[j].posterior_grad_aug;

  std::vector<Vec> directions(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    if (!states[i].finite) {
      directions[i] = Vec::Zero(n_aug);
      continue;
    }
    Vec acc = Vec::Zero(n_aug);
    Vec grad_k_aug = Vec::Zero(n_aug);
    for (int j = 0; j < n; ++j) {
      if (!states[j].finite) continue;
      const double k =
          kernel.value(states[i].particle.particle, states[j].particle.particle);
      // The scalar kernel sees the original trajectory only; its gradient is
      // zero along slack coordinates.
      grad_k_aug.head(n_tau) =
          kernel.grad_second(states[i].particle.particle, states[j].particle.particle);
      acc.noalias() += gamma_anneal * k * driven[j];
      acc.noalias() += states[j].proj.P * grad_k_aug;
      acc.noalias() += k * states[j].dp_colsum;
    }
    directions[i] = states[i].proj.P * acc / static_cast<double>(n);
  }
  return directions;
}

std::vector<Vec> stein_direction(const ProblemDef& problem,
                                 const std::vector<AugmentedParticle>& particles,
                                 double gamma_anneal, const SolverConfig& cfg) {
  auto states = prepare_particles(problem, particles, cfg.lambda, cfg.svd_cutoff);
  std::vector<TrajectoryParticle> trajectories;
  trajectories.reserve(particles.size());
  for (const auto& p : particles) trajectories.push_back(p.particle);
  TrajectoryKernel kernel(trajectories, cfg.window);
  return stein_direction(problem, states, kernel, gamma_anneal);
}

void project_bounds(TrajectoryParticle& particle, const Bounds& bounds) {
  for (int t = 0; t < particle.horizon(); ++t) {
    particle.states.row(t) = particle.states.row(t)
                                 .cwiseMax(bounds.x_min.transpose())
                                 .cwiseMin(bounds.x_max.transpose());
    if (particle.control_dim() > 0)
      particle.controls.row(t) = particle.controls.row(t)
                                     .cwiseMax(bounds.u_min.transpose())
                                     .cwiseMin(bounds.u_max.transpose());
  }
}

void project_bounds(AugmentedParticle& particle, const Bounds& bounds) {
  project_bounds(particle.particle, bounds);
}

namespace {

std::vector<AugmentedParticle> step_from_states(const ProblemDef& problem,
                                                const std::vector<ParticleState>& states,
                                                const TrajectoryKernel& kernel,
                                                const SolverConfig& cfg,
                                                double gamma_anneal, StepOutput* out) {
  const int n = static_cast<int>(states.size());
  const auto phi_perp = stein_direction(problem, states, kernel, gamma_anneal);

  std::vector<Vec> phi_c(n);
  for (int i = 0; i < n; ++i)
    phi_c[i] = states[i].finite
                   ? feasibility_step(states[i].proj, states[i].bundle.values)
                   : Vec::Zero(problem.num_aug());

  std::vector<AugmentedParticle> next(n);
  int resets = 0;
  for (int i = 0; i < n; ++i) {
    const Vec updated = states[i].particle.flatten() + cfg.alpha_j * phi_perp[i] +
                        cfg.alpha_c * phi_c[i];
    if (!updated.allFinite()) {
      next[i] = states[i].particle;  // keep the pre-update state alive
      ++resets;
      continue;
    }
    next[i] = AugmentedParticle::unflatten(updated, problem.horizon, problem.state_dim,
                                           problem.control_dim, problem.num_slack());
    project_bounds(next[i], problem.bounds);
  }
  if (out) {
    out->phi_perp = phi_perp;
    out->phi_c = phi_c;
    out->nonfinite_resets = resets;
  }
  return next;
}

TrajectoryKernel fit_kernel(const std::vector<ParticleState>& states, int window) {
  std::vector<TrajectoryParticle> trajectories;
  trajectories.reserve(states.size());
  for (const auto& s : states) trajectories.push_back(s.particle.particle);
  return TrajectoryKernel(trajectories, window);
}

}  // namespace

std::vector<AugmentedParticle> csvto_step(const ProblemDef& problem,
                                          const std::vector<AugmentedParticle>& particles,
                                          const SolverConfig& cfg, double gamma_anneal,
                                          StepOutput* out) {
  cfg.validate();
  auto states = prepare_particles(problem, particles, cfg.lambda, cfg.svd_cutoff);
  const TrajectoryKernel kernel = fit_kernel(states, cfg.window);
  return step_from_states(problem, states, kernel, cfg, gamma_anneal, out);
}

SolveResult solve(const ProblemDef& problem, const Vec& x0,
                  const std::vector<TrajectoryParticle>& init, int iters, bool anneal,
                  const SolverConfig& cfg) {
  cfg.validate();
  if (init.empty()) throw std::invalid_argument("solve: empty initial particle set");
  if (iters < 0) throw std::invalid_argument("solve: negative iteration count");

  ProblemDef prob = problem;
  if (prob.has_dynamics()) prob.x0 = x0;
  prob.validate();

  std::vector<AugmentedParticle> particles(init.size());
  for (size_t i = 0; i < init.size(); ++i) {
    init[i].validate();
    particles[i].particle = init[i];
    particles[i].slack =
        prob.num_slack() > 0 ? init_slack(prob.inequality.values(init[i])) : Vec(0);
  }

  SolveResult result;
  auto states = prepare_particles(prob, particles, cfg.lambda, cfg.svd_cutoff);
  for (int k = 1; k <= iters; ++k) {
    const double gamma = anneal ? static_cast<double>(k) / iters : 1.0;
    const TrajectoryKernel kernel = fit_kernel(states, cfg.window);
    StepOutput step_out;
    particles = step_from_states(prob, states, kernel, cfg, gamma, &step_out);
    states = prepare_particles(prob, particles, cfg.lambda, cfg.svd_cutoff);

    IterationStats stats;
    stats.nonfinite_resets = step_out.nonfinite_resets;
    double best_penalty = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < states.size(); ++i) {
      if (!states[i].finite || !std::isfinite(states[i].penalty)) continue;
      stats.max_abs_constraint = std::max(
          stats.max_abs_constraint, states[i].bundle.values.cwiseAbs().maxCoeff());
      if (states[i].penalty < best_penalty) {
        best_penalty = states[i].penalty;
        stats.best_penalty = states[i].penalty;
        stats.best_cost = states[i].cost;
      }
    }
    for (size_t i = 0; i < states.size(); ++i) {
      stats.max_phi_perp_norm = std::max(stats.max_phi_perp_norm, step_out.phi_perp[i].norm());
      stats.max_phi_c_norm = std::max(stats.max_phi_c_norm, step_out.phi_c[i].norm());
    }
    result.iterations.push_back(stats);
  }

  int best_index = -1;
  double best_penalty = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < states.size(); ++i) {
    if (!states[i].finite || !std::isfinite(states[i].penalty)) {
      result.nonfinite_particles.push_back(static_cast<int>(i));
      continue;
    }
    if (states[i].penalty < best_penalty) {
      best_penalty = states[i].penalty;
      best_index = static_cast<int>(i);
    }
  }
  if (best_index < 0)
    throw std::runtime_error("solve: every particle has a non-finite penalty");

  result.best = particles[best_index];
  result.best_index = best_index;
  result.particles = std::move(particles);
  return result;
}

TrajectoryParticle shift(const TrajectoryParticle& particle) {
  const int horizon = particle.horizon();
  if (horizon < 2) throw std::invalid_argument("shift: horizon must be >= 2");
  TrajectoryParticle out = particle;
  out.states.topRows(horizon - 1) = particle.states.bottomRows(horizon - 1);
  out.states.row(horizon - 1) = particle.states.row(horizon - 1);
  out.controls.topRows(horizon - 1) = particle.controls.bottomRows(horizon - 1);
  out.controls.row(horizon - 1) = particle.controls.row(horizon - 1);
  return out;
}

std::vector<TrajectoryParticle> shift(const std::vector<TrajectoryParticle>& particles) {
  std::vector<TrajectoryParticle> out;
  out.reserve(particles.size());
  for (const auto& p : particles) out.push_back(shift(p));
  return out;
}

ResampleResult resample(const ProblemDef& problem,
                        const std::vector<AugmentedParticle>& particles, double beta,
                        double sigma_resample, double lambda, Rng& rng,
                        double svd_cutoff) {
  if (beta <= 0.0) throw std::invalid_argument("resample: beta must be > 0");
  const int n = static_cast<int>(particles.size());
  if (n == 0) throw std::invalid_argument("resample: empty particle set");

  ResampleResult result;
  Vec penalties(n);
  for (int i = 0; i < n; ++i) {
    try {
      penalties[i] = augmented_penalty(problem, particles[i], lambda);
    } catch (const std::exception&) {
      penalties[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }

  double min_pen = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    if (std::isfinite(penalties[i])) min_pen = std::min(min_pen, penalties[i]);

  Vec weights = Vec::Zero(n);
  double total = 0.0;
  if (std::isfinite(min_pen)) {
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(penalties[i])) continue;
      weights[i] = std::exp(-(penalties[i] - min_pen) / beta);
      total += weights[i];
    }
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    weights.setConstant(1.0 / n);
    result.uniform_fallback = true;
  } else {
    weights /= total;
  }
  result.weights = weights;

  // Systematic draw with replacement.
  const double offset = rng.uniform() / n;
  result.draws.resize(n);
  int idx = 0;
  double cumulative = weights[0];
  for (int k = 0; k < n; ++k) {
    const double point = offset + static_cast<double>(k) / n;
    while (point > cumulative && idx < n - 1) cumulative += weights[++idx];
    result.draws[k] = idx;
  }

  // Tangent-space perturbation, projector cached per distinct source.
  std::vector<Mat> projector(n);
  std::vector<bool> have(n, false);
  result.particles.resize(n);
  for (int k = 0; k < n; ++k) {
    const int src = result.draws[k];
    const Vec noise = rng.normal_vec(problem.num_aug(), sigma_resample);
    if (!have[src]) {
      const ConstraintBundle bundle = eval_constraints(problem, particles[src]);
      projector[src] = projection_matrix(bundle.jacobian, svd_cutoff).P;
      have[src] = true;
    }
    const Vec perturbed = particles[src].flatten() + projector[src] * noise;
    result.particles[k] =
        AugmentedParticle::unflatten(perturbed, problem.horizon, problem.state_dim,
                                     problem.control_dim, problem.num_slack());
  }
  return result;
}

std::vector<TrajectoryParticle> init_particles(const ProblemDef& problem, const Vec& x0,
                                               int count, Rng& rng, double init_sigma) {
  if (!problem.has_dynamics())
    throw std::invalid_argument("init_particles: problem has no dynamics to roll out");
  std::vector<TrajectoryParticle> out(count);
  for (int i = 0; i < count; ++i) {
    Mat controls(problem.horizon, problem.control_dim);
    for (int t = 0; t < problem.horizon; ++t)
      for (int c = 0; c < problem.control_dim; ++c) {
        const double mean =
            problem.init_control_mean.size() > 0 ? problem.init_control_mean[c] : 0.0;
        double sigma = init_sigma;
        if (problem.init_control_sigma.size() > 0)
          sigma = problem.init_control_sigma[c];
        else if (problem.control_prior_sigma.size() > 0)
          sigma = problem.control_prior_sigma[c];
        controls(t, c) = mean + sigma * rng.normal();
      }
    out[i].controls = controls;
    out[i].states = rollout_dynamics(x0, controls, problem.dynamics);
  }
  return out;
}

MpcTrace mpc_run(Env& env, const ProblemDef& problem, const SolverConfig& cfg,
                 int total_steps) {
  cfg.validate();
  if (!problem.has_dynamics())
    throw std::invalid_argument("mpc_run: problem has no dynamics");
  if (total_steps < 1) throw std::invalid_argument("mpc_run: total_steps must be >= 1");

  MpcTrace trace;
  Rng rng(cfg.seed);
  ProblemDef prob = problem;

  prob.x0 = env.state();
  env.begin_plan();
  std::vector<TrajectoryParticle> particles =
      init_particles(prob, prob.x0, cfg.num_particles, rng, cfg.init_sigma);

  for (int t = 1; t <= total_steps; ++t) {
    prob.x0 = env.state();
    env.begin_plan();
    const auto t_start = std::chrono::steady_clock::now();

    if (t % cfg.resample_steps == 0) {
      std::vector<AugmentedParticle> augmented(particles.size());
      for (size_t i = 0; i < particles.size(); ++i) {
        augmented[i].particle = particles[i];
        augmented[i].slack = prob.num_slack() > 0
                                 ? init_slack(prob.inequality.values(particles[i]))
                                 : Vec(0);
      }
      ResampleResult rr = resample(prob, augmented, cfg.beta, cfg.sigma_resample,
                                   cfg.lambda, rng, cfg.svd_cutoff);
      if (rr.uniform_fallback) trace.resample_fallback_steps.push_back(t);
      for (size_t i = 0; i < particles.size(); ++i)
        particles[i] = rr.particles[i].particle;
    }

    const int iters = (t == 1) ? cfg.warm_iters : cfg.online_iters;
    const bool anneal = (t == 1) && cfg.anneal;
    SolveResult res = solve(prob, prob.x0, particles, iters, anneal, cfg);

    const auto t_end = std::chrono::steady_clock::now();

    MpcStepRecord rec;
    rec.step = t;
    rec.control = res.best.particle.controls.row(0);
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

    std::vector<TrajectoryParticle> next(res.particles.size());
    for (size_t i = 0; i < res.particles.size(); ++i)
      next[i] = shift(res.particles[i].particle);
    particles = std::move(next);
  }
  return trace;
}

}  // namespace csvto
