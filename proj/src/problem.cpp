#include "csvto/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace csvto {

Bounds Bounds::unbounded(int state_dim, int control_dim) {
  const double inf = std::numeric_limits<double>::infinity();
  Bounds b;
  b.x_min = Vec::Constant(state_dim, -inf);
  b.x_max = Vec::Constant(state_dim, inf);
  b.u_min = Vec::Constant(control_dim, -inf);
  b.u_max = Vec::Constant(control_dim, inf);
  return b;
}

void Bounds::validate(int state_dim, int control_dim) const {
  if (x_min.size() != state_dim || x_max.size() != state_dim ||
      u_min.size() != control_dim || u_max.size() != control_dim)
    throw std::invalid_argument("bounds: dimension mismatch");
  if ((x_min.array() > x_max.array()).any() || (u_min.array() > u_max.array()).any())
    throw std::invalid_argument("bounds: min exceeds max");
}

Vec ProblemDef::log_posterior_gradient(const TrajectoryParticle& p) const {
  Vec grad = -gamma_lik * cost_gradient(p);
  if (control_prior_sigma.size() > 0) {
    const int off = horizon * state_dim;
    for (int t = 0; t < horizon; ++t)
      for (int c = 0; c < control_dim; ++c) {
        const double s2 = control_prior_sigma[c] * control_prior_sigma[c];
        grad[off + t * control_dim + c] -= p.controls(t, c) / s2;
      }
  }
  return grad;
}

void ProblemDef::validate() const {
  if (horizon < 1) throw std::invalid_argument("problem: horizon must be >= 1");
  if (state_dim < 1) throw std::invalid_argument("problem: state_dim must be >= 1");
  if (control_dim < 0) throw std::invalid_argument("problem: control_dim must be >= 0");
  if (!cost || !cost_gradient)
    throw std::invalid_argument("problem: cost and cost_gradient are required");
  if (gamma_lik <= 0.0) throw std::invalid_argument("problem: gamma_lik must be > 0");
  if (has_dynamics() &&
      (dynamics.state_dim != state_dim || dynamics.control_dim != control_dim))
    throw std::invalid_argument("problem: dynamics dimensions disagree");
  if (has_dynamics() && x0.size() != state_dim)
    throw std::invalid_argument("problem: x0 has wrong dimension");
  if (control_prior_sigma.size() > 0 && control_prior_sigma.size() != control_dim)
    throw std::invalid_argument("problem: control_prior_sigma has wrong dimension");
  if (init_control_sigma.size() > 0 && init_control_sigma.size() != control_dim)
    throw std::invalid_argument("problem: init_control_sigma has wrong dimension");
  if (init_control_mean.size() > 0 && init_control_mean.size() != control_dim)
    throw std::invalid_argument("problem: init_control_mean has wrong dimension");
  bounds.validate(state_dim, control_dim);
}

Mat rollout_dynamics(const Vec& x0, const Mat& controls, const DynamicsModel& dynamics) {
  if (!dynamics.valid()) throw std::invalid_argument("rollout: dynamics not set");
  if (x0.size() != dynamics.state_dim)
    throw std::invalid_argument("rollout: x0 dimension mismatch");
  if (!x0.allFinite()) throw std::invalid_argument("rollout: non-finite initial state");
  const int horizon = static_cast<int>(controls.rows());
  Mat states(horizon, dynamics.state_dim);
  Vec x = x0;
  for (int t = 0; t < horizon; ++t) {
    x = dynamics.f(x, controls.row(t));
    if (!x.allFinite())
      throw std::runtime_error("rollout: non-finite state at timestep " +
                               std::to_string(t + 1));
    states.row(t) = x;
  }
  return states;
}

Vec assemble_defects(const TrajectoryParticle& particle, const Vec& x0,
                     const DynamicsModel& dynamics) {
  if (!dynamics.valid()) throw std::invalid_argument("defects: dynamics not set");
  if (particle.state_dim() != dynamics.state_dim ||
      particle.control_dim() != dynamics.control_dim || x0.size() != dynamics.state_dim)
    throw std::invalid_argument("defects: dimension mismatch");
  const int horizon = particle.horizon();
  const int dx = dynamics.state_dim;
  Vec defects(horizon * dx);
  Vec prev = x0;
  for (int t = 0; t < horizon; ++t) {
    defects.segment(t * dx, dx) =
        dynamics.f(prev, particle.controls.row(t)) - particle.states.row(t).transpose();
    prev = particle.states.row(t);
  }
  return defects;
}

namespace {

[[noreturn]] void rethrow_block(const char* block, const std::exception& e) {
  throw std::runtime_error(std::string(block) + " provider failed: " + e.what());
}

}  // namespace

ConstraintBundle eval_constraints(const ProblemDef& problem,
                                  const AugmentedParticle& particle) {
  const int n_tau = problem.num_tau();
  const int n_slack = problem.num_slack();
  const int n_aug = n_tau + n_slack;
  const int m_eq = problem.equality.rows;
  const int m_dyn = problem.num_defects();
  const int m_total = m_eq + m_dyn + n_slack;

  if (particle.particle.flat_size() != n_tau ||
      static_cast<int>(particle.slack.size()) != n_slack)
    throw std::invalid_argument("eval_constraints: particle dimension mismatch");

  ConstraintBundle bundle;
  bundle.values.resize(m_total);
  bundle.jacobian = Mat::Zero(m_total, n_aug);
  bundle.hessians.assign(m_total, ConstraintHessian{});

  const TrajectoryParticle& traj = particle.particle;

  if (m_eq > 0) {
    try {
      bundle.values.head(m_eq) = problem.equality.values(traj);
      bundle.jacobian.topLeftCorner(m_eq, n_tau) = problem.equality.jacobian(traj);
      if (problem.equality.has_hessians) {
        auto hs = problem.equality.hessians(traj);
        if (static_cast<int>(hs.size()) != m_eq)
          throw std::runtime_error("wrong number of Hessian rows");
        for (int l = 0; l < m_eq; ++l) bundle.hessians[l] = std::move(hs[l]);
      }
    } catch (const std::exception& e) {
      rethrow_block("equality constraint (rows 0..)", e);
    }
  }

  if (m_dyn > 0) {
    const int dx = problem.state_dim;
    const int du = problem.control_dim;
    const int u_off = problem.horizon * dx;
    Vec prev = problem.x0;
    for (int t = 0; t < problem.horizon; ++t) {
      const Vec u = traj.controls.row(t);
      const int row0 = m_eq + t * dx;
      try {
        bundle.values.segment(row0, dx) =
            problem.dynamics.f(prev, u) - traj.states.row(t).transpose();
        if (t > 0)
          bundle.jacobian.block(row0, (t - 1) * dx, dx, dx) =
              problem.dynamics.jac_state(prev, u);
        bundle.jacobian.block(row0, u_off + t * du, dx, du) =
            problem.dynamics.jac_control(prev, u);
        bundle.jacobian.block(row0, t * dx, dx, dx) -= Mat::Identity(dx, dx);
        if (problem.dynamics.has_hessians) {
          // Hessians come over the local (x_{t-1}, u_{t-1}) block; remap into
          // flat trajectory coordinates. x_0 columns do not exist at t = 0.
          auto hs = problem.dynamics.hessians(prev, u);
          if (static_cast<int>(hs.size()) != dx)
            throw std::runtime_error("wrong number of dynamics Hessian rows");
          for (int i = 0; i < dx; ++i) {
            ConstraintHessian mapped;
            mapped.available = true;
            mapped.entries.reserve(hs[i].entries.size());
            for (const auto& e : hs[i].entries) {
              auto remap = [&](int local) {
                if (local < dx)
                  return (t > 0) ? (t - 1) * dx + local : -1;
                return u_off + t * du + (local - dx);
              };
              const int r = remap(e.row);
              const int c = remap(e.col);
              if (r < 0 || c < 0) continue;  // derivative w.r.t. the fixed x0
              mapped.add(r, c, e.value);
            }
            bundle.hessians[row0 + i] = std::move(mapped);
          }
        }
      } catch (const std::exception& e) {
        rethrow_block(("dynamics defect at timestep " + std::to_string(t + 1)).c_str(), e);
      }
      prev = traj.states.row(t);
    }
  }

  if (n_slack > 0) {
    const int row0 = m_eq + m_dyn;
    try {
      bundle.values.segment(row0, n_slack) =
          problem.inequality.values(traj) +
          0.5 * particle.slack.array().square().matrix();
      bundle.jacobian.block(row0, 0, n_slack, n_tau) = problem.inequality.jacobian(traj);
      for (int i = 0; i < n_slack; ++i)
        bundle.jacobian(row0 + i, n_tau + i) = particle.slack[i];
      std::vector<ConstraintHessian> hs;
      if (problem.inequality.has_hessians) {
        hs = problem.inequality.hessians(traj);
        if (static_cast<int>(hs.size()) != n_slack)
          throw std::runtime_error("wrong number of Hessian rows");
      }
      for (int i = 0; i < n_slack; ++i) {
        if (!problem.inequality.has_hessians || !hs[i].available) continue;
        ConstraintHessian aug = std::move(hs[i]);
        aug.add(n_tau + i, n_tau + i, 1.0);  // d^2 (z_i^2/2) / dz_i^2
        bundle.hessians[row0 + i] = std::move(aug);
      }
    } catch (const std::exception& e) {
      rethrow_block(("inequality constraint (rows " + std::to_string(row0) + "..)").c_str(),
                    e);
    }
  }

  return bundle;
}

double augmented_penalty(const ProblemDef& problem, const AugmentedParticle& particle,
                         double lambda, const ConstraintBundle& bundle) {
  return problem.cost(particle.particle) + lambda * bundle.values.array().abs().sum();
}

double augmented_penalty(const ProblemDef& problem, const AugmentedParticle& particle,
                         double lambda) {
  return augmented_penalty(problem, particle, lambda, eval_constraints(problem, particle));
}

}  // namespace csvto
