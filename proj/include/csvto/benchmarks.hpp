#pragma once

#include "csvto/gp.hpp"
#include "csvto/problem.hpp"
#include "csvto/solver.hpp"

#include <cstdint>
#include <memory>

namespace csvto {

// ---------------------------------------------------------------------------
// 2D toy problem: sample from a 3-Gaussian mixture restricted to a circle,
// with a disk-shaped excluded region around one of the mixture peaks. One
// peak is deliberately infeasible, which reproduces the local-minimum trap
// the resampling step is designed to escape.
// ---------------------------------------------------------------------------

struct Toy2DGeometry {
  double circle_radius = 2.0;
  double mixture_variance = 0.25;
  Mat means;             // 3 x 2, at angles 90/210/330 degrees on the circle
  Vec excluded_center;   // the 330-degree mean
  double excluded_radius = 0.8;
};

const Toy2DGeometry& toy2d_geometry();

/// Horizon-1, control-free problem: h(x) = ||x||^2 - r^2 (on the circle),
/// g(x) = r_excl^2 - ||x - c||^2 <= 0 (outside the excluded disk), posterior
/// the mixture density. All derivatives, including Hessians, are analytic.
ProblemDef make_toy2d();

double toy2d_log_density(const Vec& point);

// ---------------------------------------------------------------------------
// 12DoF quadrotor on a GP surface.
// ---------------------------------------------------------------------------

struct QuadrotorParams {
  double mass = 1.0;          // kg
  double inertia_x = 0.5;     // kg m^2
  double inertia_y = 0.1;
  double inertia_z = 0.3;
  double thrust_gain = 5.0;   // K
  double gravity = -9.81;     // m s^-2
  double dt = 0.1;            // s
};

enum class ObstacleVariant { kNone, kStatic, kDynamic };

/// State layout [x y z p q r vx vy vz wp wq wr], controls [u1..u4]; Euler
/// integration of the standard Euler-angle quadrotor model. Analytic
/// Jacobians and per-row Hessians.
DynamicsModel quadrotor_dynamics(const QuadrotorParams& params);

/// Thrust making the vertical acceleration vanish at level attitude.
double quadrotor_hover_thrust(const QuadrotorParams& params);

/// Surface z = f(x, y): GP posterior mean fit to values sampled from the GP
/// prior on a fixed 10x10 grid over [-5, 5]^2 (lengthscale 2, zero mean,
/// seed 0). Built once and shared.
const GpPosteriorMean& quadrotor_surface();

/// Obstacle field f_obs(x, y) <= 0 is free space: GP with constant mean -0.5
/// (free-space bias), grid-sampled values, plus forced free observations at
/// (-4,-4) and (4,4).
const GpPosteriorMean& quadrotor_obstacle_field();

class QuadrotorEnv;

struct QuadrotorBenchmark {
  ProblemDef problem;
  std::shared_ptr<QuadrotorEnv> env;
  Vec start;             // 12-dim initial state, at rest on the surface
  Vec goal;              // 12-dim goal state
  double goal_threshold = 0.3;  // meters, in the x-y plane
};

/// Start (x, y) drawn uniformly from [-4.5, -3.0]^2 using `start_seed`, goal
/// fixed at (4, 4); both placed on the surface. The env steps the same
/// dynamics model the planner uses.
QuadrotorBenchmark make_quadrotor(const QuadrotorParams& params, ObstacleVariant variant,
                                  std::uint64_t start_seed);

class QuadrotorEnv : public Env {
 public:
  QuadrotorEnv(DynamicsModel dynamics, Vec initial_state, ObstacleVariant variant,
               double dt);

  Vec state() const override { return state_; }
  void begin_plan() override;
  bool step(const Vec& control) override;
  std::string failure_reason() const override { return failure_; }

  /// Obstacle pose as the planner sees it (frozen at the last begin_plan).
  Vec frozen_obstacle_center() const { return frozen_center_; }
  /// Live obstacle pose, for violation reporting.
  Vec obstacle_center() const { return center_; }
  double obstacle_radius() const { return radius_; }

 private:
  DynamicsModel dynamics_;
  Vec state_;
  ObstacleVariant variant_;
  double dt_ = 0.05;
  Vec center_{2};
  Vec velocity_{2};
  Vec frozen_center_{2};
  double radius_ = 0.5;
  std::string failure_;
};

/// Euclidean distance of a state to the goal in the x-y plane.
double quadrotor_goal_distance(const Vec& state, const Vec& goal);

}  // namespace csvto
