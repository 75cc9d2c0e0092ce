#pragma once

#include "csvto/problem.hpp"
#include "csvto/rng.hpp"
#include "csvto/solver.hpp"

#include <cstdint>

namespace csvto {

/// Penalty-based MPPI baseline. Shooting scheme: only controls are decision
/// variables and rollouts satisfy the dynamics exactly; all constraints enter
/// through the penalty C + lambda sum|h| + mu sum max(g, 0).
struct MppiConfig {
  int num_samples = 64;
  double temperature = 1.0;
  /// Per-channel control noise scale; empty falls back to the problem's
  /// control prior sigma (or 1.0).
  Vec noise_sigma;
  double lambda_pen = 1000.0;
  double mu_pen = 2000.0;
  int warm_iters = 250;
  int online_iters = 25;
  std::uint64_t seed = 0;

  void validate() const;
};

/// C(tau) + lambda sum|h(tau)| + mu sum max(g(tau), 0). Dynamics defects are
/// not included; shooting rollouts satisfy them identically.
double penalty_cost(const ProblemDef& problem, const TrajectoryParticle& trajectory,
                    double lambda_pen, double mu_pen);

struct MppiStepResult {
  Mat controls;                     // softmin-weighted control update
  TrajectoryParticle best_rollout;  // lowest-penalty sample this step
  double best_cost = 0.0;
};

/// One MPPI update: perturb the nominal controls with Gaussian noise, roll
/// out, weight by exp(-penalty/temperature) and average. Deterministic given
/// the rng state.
MppiStepResult mppi_step(const Mat& nominal_controls, const ProblemDef& problem,
                         const MppiConfig& cfg, Rng& rng);

/// Receding-horizon MPPI driver matching the CSVTO one: warm iterations at
/// t = 1, online iterations afterwards, first nominal control executed, shift.
MpcTrace mppi_mpc_run(Env& env, const ProblemDef& problem, const MppiConfig& cfg,
                      int total_steps);

}  // namespace csvto
