#pragma once

#include "csvto/geometry.hpp"
#include "csvto/kernels.hpp"
#include "csvto/problem.hpp"
#include "csvto/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace csvto {

struct SolverConfig {
  int num_particles = 8;
  double alpha_j = 0.05;      // tangent-space Stein step size
  double alpha_c = 1.0;       // Gauss-Newton feasibility step size
  int warm_iters = 100;       // iterations at the first MPC timestep
  int online_iters = 10;      // iterations at subsequent timesteps
  int resample_steps = 10;    // resample every this many timesteps
  double beta = 0.55;         // resampling softmin temperature
  double sigma_resample = 0.1;
  double lambda = 1000.0;     // penalty weight for best selection / weights
  int window = 3;             // sliding-window length of the trajectory kernel
  std::uint64_t seed = 0;
  bool anneal = true;         // anneal the warm-start solve
  double svd_cutoff = kDefaultSvdCutoff;
  double init_sigma = 1.0;    // initialization noise when no prior sigma is set

  void validate() const;
};

/// Per-particle data prepared once per iteration: constraints, projector,
/// projector-derivative contraction and posterior gradient, all at the
/// current particle.
struct ParticleState {
  AugmentedParticle particle;
  ConstraintBundle bundle;
  ProjectionData proj;
  Vec dp_colsum;            // projector-derivative column sum
  Vec posterior_grad_aug;   // [grad log p(tau | o=1); zeros for slack]
  double cost = 0.0;
  double penalty = 0.0;
  bool finite = true;
};

std::vector<ParticleState> prepare_particles(const ProblemDef& problem,
                                             const std::vector<AugmentedParticle>& particles,
                                             double lambda, double svd_cutoff);

/// Tangent-space Stein direction for every particle:
/// phi_perp(tau_i) = (1/N) sum_j [ gamma K_perp(i,j) [grad log p(tau_j); 0]
///                                 + grad_{tau_j} K_perp(i,j) ].
/// gamma_anneal scales only the posterior term. Throws when a posterior
/// gradient is non-finite, naming the particle.
std::vector<Vec> stein_direction(const ProblemDef& problem,
                                 const std::vector<ParticleState>& states,
                                 const TrajectoryKernel& kernel, double gamma_anneal);

/// Convenience overload that prepares states and fits the kernel itself.
std::vector<Vec> stein_direction(const ProblemDef& problem,
                                 const std::vector<AugmentedParticle>& particles,
                                 double gamma_anneal, const SolverConfig& cfg);

/// Componentwise clamp of states and controls to the box bounds; slack is
/// never clamped.
void project_bounds(TrajectoryParticle& particle, const Bounds& bounds);
void project_bounds(AugmentedParticle& particle, const Bounds& bounds);

struct StepOutput {
  std::vector<Vec> phi_perp;
  std::vector<Vec> phi_c;
  int nonfinite_resets = 0;
};

/// One synchronous update of the whole set:
/// tau_hat += alpha_j * phi_perp + alpha_c * phi_c, then bounds projection.
/// Particles that turn non-finite are reset to their pre-update state.
std::vector<AugmentedParticle> csvto_step(const ProblemDef& problem,
                                          const std::vector<AugmentedParticle>& particles,
                                          const SolverConfig& cfg, double gamma_anneal,
                                          StepOutput* out = nullptr);

struct IterationStats {
  double max_abs_constraint = 0.0;  // max over particles of ||h_hat||_inf
  double best_penalty = 0.0;
  double best_cost = 0.0;
  double max_phi_perp_norm = 0.0;
  double max_phi_c_norm = 0.0;
  int nonfinite_resets = 0;
};

struct SolveResult {
  AugmentedParticle best;
  int best_index = -1;
  std::vector<AugmentedParticle> particles;
  std::vector<IterationStats> iterations;
  std::vector<int> nonfinite_particles;  // excluded from best selection

  TrajectoryParticle best_trajectory() const { return best.particle; }
};

/// Runs `iters` csvto_steps from the given trajectories; slack is initialized
/// as z = sqrt(2|g|). With anneal, gamma = k/iters for k = 1..iters, else 1.
/// Best particle minimizes the penalty C + lambda sum|h_hat| (ties: lowest
/// index).
SolveResult solve(const ProblemDef& problem, const Vec& x0,
                  const std::vector<TrajectoryParticle>& init, int iters, bool anneal,
                  const SolverConfig& cfg);

/// Warm-start shift: states and controls move left one step, the last row is
/// duplicated. Requires T >= 2.
TrajectoryParticle shift(const TrajectoryParticle& particle);
std::vector<TrajectoryParticle> shift(const std::vector<TrajectoryParticle>& particles);

struct ResampleResult {
  std::vector<AugmentedParticle> particles;
  Vec weights;
  std::vector<int> draws;
  bool uniform_fallback = false;
};

/// Systematic resampling with softmin penalty weights
/// w_i proportional to exp(-C_lambda(tau_hat_i) / beta), followed by
/// tangent-space noise tau_new = tau_hat_i + P(tau_hat_i) eps with
/// eps ~ N(0, sigma^2 I) in the augmented space.
ResampleResult resample(const ProblemDef& problem,
                        const std::vector<AugmentedParticle>& particles, double beta,
                        double sigma_resample, double lambda, Rng& rng,
                        double svd_cutoff = kDefaultSvdCutoff);

/// Samples initial trajectories: controls from the Gaussian prior (or
/// init_sigma when no prior is set), states by rolling out the dynamics so
/// initialization satisfies the dynamics constraint exactly.
std::vector<TrajectoryParticle> init_particles(const ProblemDef& problem, const Vec& x0,
                                               int count, Rng& rng,
                                               double init_sigma = 1.0);

/// A steppable system driven by the MPC loop.
class Env {
 public:
  virtual ~Env() = default;
  virtual Vec state() const = 0;
  /// Called before each planning round; freeze anything that moves so the
  /// planner sees a static world.
  virtual void begin_plan() {}
  /// Advances one step; returns false on failure (e.g. collision).
  virtual bool step(const Vec& control) = 0;
  virtual std::string failure_reason() const { return {}; }
};

struct MpcStepRecord {
  int step = 0;   // 1-based
  Vec state;      // executed state after stepping
  Vec control;    // executed control
  std::vector<double> violations;  // problem.monitors at the executed state
  double wall_ms = 0.0;            // planning time for this step
};

struct MpcTrace {
  std::vector<MpcStepRecord> steps;
  bool failed = false;
  std::string failure;
  std::vector<int> resample_fallback_steps;
};

/// Receding-horizon loop: warm-start solve with annealing at t = 1, online
/// iterations afterwards, executing the first control of the best particle,
/// shifting, and resampling every resample_steps timesteps.
MpcTrace mpc_run(Env& env, const ProblemDef& problem, const SolverConfig& cfg,
                 int total_steps);

}  // namespace csvto
