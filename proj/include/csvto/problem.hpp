#pragma once

#include "csvto/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace csvto {

/// Componentwise box bounds; +-inf entries disable a side.
struct Bounds {
  Vec x_min, x_max, u_min, u_max;

  static Bounds unbounded(int state_dim, int control_dim);
  void validate(int state_dim, int control_dim) const;
};

/// Discrete dynamics x' = f(x, u) with analytic first derivatives and
/// optional second derivatives. Hessians are per output row, over the stacked
/// (x, u) coordinates.
struct DynamicsModel {
  int state_dim = 0;
  int control_dim = 0;
  std::function<Vec(const Vec& x, const Vec& u)> f;
  std::function<Mat(const Vec& x, const Vec& u)> jac_state;    // d_x x d_x
  std::function<Mat(const Vec& x, const Vec& u)> jac_control;  // d_x x d_u
  bool has_hessians = false;
  std::function<std::vector<ConstraintHessian>(const Vec& x, const Vec& u)> hessians;

  bool valid() const { return static_cast<bool>(f); }
};

/// Vector-valued constraint on a whole trajectory, with Jacobian over the
/// flattened decision vector and optional sparse per-row Hessians.
struct TrajectoryConstraint {
  int rows = 0;
  std::function<Vec(const TrajectoryParticle&)> values;
  std::function<Mat(const TrajectoryParticle&)> jacobian;
  bool has_hessians = false;
  std::function<std::vector<ConstraintHessian>(const TrajectoryParticle&)> hessians;

  bool empty() const { return rows == 0; }
};

/// Named scalar violation evaluated on a single executed state, used for
/// reporting. Violations are measured on what the system actually did, not on
/// the plan.
struct StateMonitor {
  std::string name;
  std::function<double(const Vec& state)> violation;
};

/// A trajectory optimization problem under direct transcription. Dynamics
/// defects f(x_{t-1}, u_{t-1}) - x_t are ordinary equality rows; problems
/// without dynamics (pure constrained sampling) leave `dynamics.f` unset.
struct ProblemDef {
  int horizon = 0;
  int state_dim = 0;
  int control_dim = 0;
  Vec x0;

  DynamicsModel dynamics;

  std::function<double(const TrajectoryParticle&)> cost;  // nonnegative
  std::function<Vec(const TrajectoryParticle&)> cost_gradient;
  double gamma_lik = 1.0;

  /// Standard deviation of the Gaussian control prior p(U); empty disables
  /// the prior gradient term (the regularization then lives inside the cost).
  Vec control_prior_sigma;
  /// Sampling distribution for trajectory initialization. Sigma falls back to
  /// control_prior_sigma when empty; mean defaults to zero.
  Vec init_control_sigma;
  Vec init_control_mean;

  TrajectoryConstraint equality;    // h(tau) = 0, excluding dynamics defects
  TrajectoryConstraint inequality;  // g(tau) <= 0

  Bounds bounds;

  std::vector<StateMonitor> monitors;
  std::vector<std::string> state_names;
  std::vector<std::string> control_names;

  int num_tau() const { return horizon * (state_dim + control_dim); }
  int num_slack() const { return inequality.rows; }
  int num_aug() const { return num_tau() + num_slack(); }
  int num_defects() const { return has_dynamics() ? horizon * state_dim : 0; }
  int num_constraints() const { return equality.rows + num_defects() + num_slack(); }
  bool has_dynamics() const { return dynamics.valid(); }

  /// grad log p(tau | o=1) = -gamma_lik * grad C(tau) + grad log p(U), over
  /// the flattened trajectory (no slack coordinates).
  Vec log_posterior_gradient(const TrajectoryParticle& p) const;

  void validate() const;
};

/// Rolls controls through the dynamics: x_t = f(x_{t-1}, u_{t-1}), returning
/// the T x d_x state matrix. Throws if a non-finite state appears, naming the
/// timestep.
Mat rollout_dynamics(const Vec& x0, const Mat& controls, const DynamicsModel& dynamics);

/// Stacked dynamics defects f(x_{t-1}, u_{t-1}) - x_t for t = 1..T; zero iff
/// the trajectory is dynamically feasible.
Vec assemble_defects(const TrajectoryParticle& particle, const Vec& x0,
                     const DynamicsModel& dynamics);

/// Assembles the full equality system on the augmented particle:
/// values = [h(tau); defects; g(tau) + z^2/2], with slack columns
/// d(g_i + z_i^2/2)/dz_i = z_i and Hessian availability propagated from the
/// providers. Provider failures are rethrown with the offending block named.
ConstraintBundle eval_constraints(const ProblemDef& problem,
                                  const AugmentedParticle& particle);

/// Penalty for best-particle selection and resampling weights:
/// C(tau) + lambda * sum |h_hat(tau_hat)| over all augmented rows.
double augmented_penalty(const ProblemDef& problem, const AugmentedParticle& particle,
                         double lambda);
double augmented_penalty(const ProblemDef& problem, const AugmentedParticle& particle,
                         double lambda, const ConstraintBundle& bundle);

}  // namespace csvto
