#include "csvto/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace csvto {

// ---------------------------------------------------------------------------
// Toy 2D
// ---------------------------------------------------------------------------

const Toy2DGeometry& toy2d_geometry() {
  static const Toy2DGeometry geom = [] {
    Toy2DGeometry g;
    g.means.resize(3, 2);
    const double angles[3] = {90.0, 210.0, 330.0};
    for (int i = 0; i < 3; ++i) {
      const double a = angles[i] * M_PI / 180.0;
      g.means(i, 0) = g.circle_radius * std::cos(a);
      g.means(i, 1) = g.circle_radius * std::sin(a);
    }
    g.excluded_center = g.means.row(2);
    return g;
  }();
  return geom;
}

namespace {

Vec toy2d_responsibilities(const Vec& point) {
  const auto& geom = toy2d_geometry();
  Vec logp(3);
  for (int i = 0; i < 3; ++i) {
    const double sq = (point - geom.means.row(i).transpose()).squaredNorm();
    logp[i] = -sq / (2.0 * geom.mixture_variance);
  }
  const double m = logp.maxCoeff();
  Vec w = (logp.array() - m).exp();
  return w / w.sum();
}

}  // namespace

double toy2d_log_density(const Vec& point) {
  const auto& geom = toy2d_geometry();
  Vec logp(3);
  for (int i = 0; i < 3; ++i) {
    const double sq = (point - geom.means.row(i).transpose()).squaredNorm();
    logp[i] = -sq / (2.0 * geom.mixture_variance) -
              std::log(2.0 * M_PI * geom.mixture_variance) - std::log(3.0);
  }
  const double m = logp.maxCoeff();
  return m + std::log((logp.array() - m).exp().sum());
}

ProblemDef make_toy2d() {
  const auto& geom = toy2d_geometry();
  ProblemDef prob;
  prob.horizon = 1;
  prob.state_dim = 2;
  prob.control_dim = 0;
  prob.x0 = Vec::Zero(2);
  prob.bounds = Bounds::unbounded(2, 0);
  prob.state_names = {"x", "y"};

  prob.cost = [](const TrajectoryParticle& p) {
    return -toy2d_log_density(p.states.row(0));
  };
  prob.cost_gradient = [geom](const TrajectoryParticle& p) {
    const Vec x = p.states.row(0);
    const Vec resp = toy2d_responsibilities(x);
    Vec grad = Vec::Zero(2);
    for (int i = 0; i < 3; ++i)
      grad += resp[i] * (x - geom.means.row(i).transpose()) / geom.mixture_variance;
    return grad;
  };

  prob.equality.rows = 1;
  prob.equality.values = [geom](const TrajectoryParticle& p) {
    const Vec x = p.states.row(0);
    return Vec::Constant(1, x.squaredNorm() - geom.circle_radius * geom.circle_radius);
  };
  prob.equality.jacobian = [](const TrajectoryParticle& p) {
    Mat jac(1, 2);
    jac.row(0) = 2.0 * p.states.row(0);
    return jac;
  };
  prob.equality.has_hessians = true;
  prob.equality.hessians = [](const TrajectoryParticle&) {
    ConstraintHessian h;
    h.available = true;
    h.add(0, 0, 2.0);
    h.add(1, 1, 2.0);
    return std::vector<ConstraintHessian>{h};
  };

  prob.inequality.rows = 1;
  prob.inequality.values = [geom](const TrajectoryParticle& p) {
    const Vec x = p.states.row(0);
    return Vec::Constant(1, geom.excluded_radius * geom.excluded_radius -
                                (x - geom.excluded_center).squaredNorm());
  };
  prob.inequality.jacobian = [geom](const TrajectoryParticle& p) {
    Mat jac(1, 2);
    jac.row(0) = -2.0 * (p.states.row(0).transpose() - geom.excluded_center);
    return jac;
  };
  prob.inequality.has_hessians = true;
  prob.inequality.hessians = [](const TrajectoryParticle&) {
    ConstraintHessian h;
    h.available = true;
    h.add(0, 0, -2.0);
    h.add(1, 1, -2.0);
    return std::vector<ConstraintHessian>{h};
  };

  return prob;
}

// ---------------------------------------------------------------------------
// Quadrotor
// ---------------------------------------------------------------------------

namespace {

struct Trig {
  double sp, cp, sq, cq, sr, cr, tq, sec;
  explicit Trig(const Vec& x) {
    sp = std::sin(x[3]); cp = std::cos(x[3]);
    sq = std::sin(x[4]); cq = std::cos(x[4]);
    sr = std::sin(x[5]); cr = std::cos(x[5]);
    tq = sq / cq;
    sec = 1.0 / cq;
  }
};

constexpr int kStateDim = 12;
constexpr int kControlDim = 4;

}  // namespace

double quadrotor_hover_thrust(const QuadrotorParams& params) {
  return params.gravity * params.mass / params.thrust_gain;
}

DynamicsModel quadrotor_dynamics(const QuadrotorParams& params) {
  DynamicsModel model;
  model.state_dim = kStateDim;
  model.control_dim = kControlDim;

  const double dt = params.dt;
  const double m = params.mass;
  const double gain = params.thrust_gain;
  const double grav = params.gravity;
  const double ix = params.inertia_x, iy = params.inertia_y, iz = params.inertia_z;

  model.f = [=](const Vec& x, const Vec& u) {
    Trig t(x);
    const double wp = x[9], wq = x[10], wr = x[11];
    const double a = gain * u[0] / m;
    const double f1 = t.sp * t.sr + t.cr * t.cp * t.sq;
    const double f2 = t.cr * t.sp - t.cp * t.sr * t.sq;
    Vec d(kStateDim);
    d[0] = x[6];
    d[1] = x[7];
    d[2] = x[8];
    d[3] = wp + wq * t.sp * t.tq + wr * t.cp * t.tq;
    d[4] = wq * t.cp - wr * t.sp;
    d[5] = (wq * t.sp + wr * t.cp) * t.sec;
    d[6] = -f1 * a;
    d[7] = -f2 * a;
    d[8] = grav - t.cp * t.cq * a;
    d[9] = ((iy - iz) * wq * wr + gain * u[1]) / ix;
    d[10] = ((iz - ix) * wp * wr + gain * u[2]) / iy;
    d[11] = ((ix - iy) * wp * wq + gain * u[3]) / iz;
    return (x + dt * d).eval();
  };

  model.jac_state = [=](const Vec& x, const Vec& u) {
    Trig t(x);
    const double wp = x[9], wq = x[10], wr = x[11];
    const double a = gain * u[0] / m;
    const double sec2 = t.sec * t.sec;
    Mat jd = Mat::Zero(kStateDim, kStateDim);
    jd(0, 6) = 1.0;
    jd(1, 7) = 1.0;
    jd(2, 8) = 1.0;
    jd(3, 3) = (wq * t.cp - wr * t.sp) * t.tq;
    jd(3, 4) = (wq * t.sp + wr * t.cp) * sec2;
    jd(3, 9) = 1.0;
    jd(3, 10) = t.sp * t.tq;
    jd(3, 11) = t.cp * t.tq;
    jd(4, 3) = -wq * t.sp - wr * t.cp;
    jd(4, 10) = t.cp;
    jd(4, 11) = -t.sp;
    jd(5, 3) = (wq * t.cp - wr * t.sp) * t.sec;
    jd(5, 4) = (wq * t.sp + wr * t.cp) * t.sec * t.tq;
    jd(5, 10) = t.sp * t.sec;
    jd(5, 11) = t.cp * t.sec;
    // f1 = sp sr + cr cp sq, f2 = cr sp - cp sr sq
    jd(6, 3) = -a * (t.cp * t.sr - t.cr * t.sp * t.sq);
    jd(6, 4) = -a * (t.cr * t.cp * t.cq);
    jd(6, 5) = -a * (t.sp * t.cr - t.sr * t.cp * t.sq);
    jd(7, 3) = -a * (t.cr * t.cp + t.sp * t.sr * t.sq);
    jd(7, 4) = -a * (-t.cp * t.sr * t.cq);
    jd(7, 5) = -a * (-t.sr * t.sp - t.cp * t.cr * t.sq);
    jd(8, 3) = t.sp * t.cq * a;
    jd(8, 4) = t.cp * t.sq * a;
    jd(9, 10) = (iy - iz) * wr / ix;
    jd(9, 11) = (iy - iz) * wq / ix;
    jd(10, 9) = (iz - ix) * wr / iy;
    jd(10, 11) = (iz - ix) * wp / iy;
    jd(11, 9) = (ix - iy) * wq / iz;
    jd(11, 10) = (ix - iy) * wp / iz;
    return (Mat::Identity(kStateDim, kStateDim) + dt * jd).eval();
  };

  model.jac_control = [=](const Vec& x, const Vec&) {
    Trig t(x);
    const double f1 = t.sp * t.sr + t.cr * t.cp * t.sq;
    const double f2 = t.cr * t.sp - t.cp * t.sr * t.sq;
    Mat jd = Mat::Zero(kStateDim, kControlDim);
    jd(6, 0) = -f1 * gain / m;
    jd(7, 0) = -f2 * gain / m;
    jd(8, 0) = -t.cp * t.cq * gain / m;
    jd(9, 1) = gain / ix;
    jd(10, 2) = gain / iy;
    jd(11, 3) = gain / iz;
    return (dt * jd).eval();
  };

  model.has_hessians = true;
  // Local coordinates 0..11 state, 12..15 control; entries are the second
  // derivatives of f_i = x_i + dt * d_i, i.e. dt * hess(d_i).
  model.hessians = [=](const Vec& x, const Vec& u) {
    Trig t(x);
    const double wp = x[9], wq = x[10], wr = x[11];
    const double a = gain * u[0] / m;
    const double km = gain / m;
    const double sec2 = t.sec * t.sec;
    const double f1 = t.sp * t.sr + t.cr * t.cp * t.sq;
    const double f2 = t.cr * t.sp - t.cp * t.sr * t.sq;
    const int P = 3, Q = 4, R = 5, WP = 9, WQ = 10, WR = 11, U1 = 12;

    std::vector<ConstraintHessian> hs(kStateDim);
    for (auto& h : hs) h.available = true;

    auto put = [dt](ConstraintHessian& h, int r, int c, double v) {
      if (v != 0.0) h.add(r, c, dt * v);
    };

    // d3 = wp + wq sp tq + wr cp tq
    put(hs[3], P, P, -(wq * t.sp + wr * t.cp) * t.tq);
    put(hs[3], P, Q, (wq * t.cp - wr * t.sp) * sec2);
    put(hs[3], Q, Q, (wq * t.sp + wr * t.cp) * 2.0 * sec2 * t.tq);
    put(hs[3], P, WQ, t.cp * t.tq);
    put(hs[3], P, WR, -t.sp * t.tq);
    put(hs[3], Q, WQ, t.sp * sec2);
    put(hs[3], Q, WR, t.cp * sec2);

    // d4 = wq cp - wr sp
    put(hs[4], P, P, -wq * t.cp + wr * t.sp);
    put(hs[4], P, WQ, -t.sp);
    put(hs[4], P, WR, -t.cp);

    // d5 = (wq sp + wr cp) sec
    put(hs[5], P, P, -(wq * t.sp + wr * t.cp) * t.sec);
    put(hs[5], P, Q, (wq * t.cp - wr * t.sp) * t.sec * t.tq);
    put(hs[5], Q, Q, (wq * t.sp + wr * t.cp) * t.sec * (sec2 + t.tq * t.tq));
    put(hs[5], P, WQ, t.cp * t.sec);
    put(hs[5], P, WR, -t.sp * t.sec);
    put(hs[5], Q, WQ, t.sp * t.sec * t.tq);
    put(hs[5], Q, WR, t.cp * t.sec * t.tq);

    // d6 = -f1 a
    put(hs[6], P, P, a * f1);
    put(hs[6], Q, Q, a * t.cr * t.cp * t.sq);
    put(hs[6], R, R, a * f1);
    put(hs[6], P, Q, a * t.cr * t.sp * t.cq);
    put(hs[6], P, R, -a * (t.cp * t.cr + t.sp * t.sr * t.sq));
    put(hs[6], Q, R, a * t.sr * t.cp * t.cq);
    put(hs[6], P, U1, -km * (t.cp * t.sr - t.cr * t.sp * t.sq));
    put(hs[6], Q, U1, -km * t.cr * t.cp * t.cq);
    put(hs[6], R, U1, -km * (t.sp * t.cr - t.sr * t.cp * t.sq));

    // d7 = -f2 a
    put(hs[7], P, P, a * f2);
    put(hs[7], Q, Q, -a * t.cp * t.sr * t.sq);
    put(hs[7], R, R, a * f2);
    put(hs[7], P, Q, -a * t.sp * t.sr * t.cq);
    put(hs[7], P, R, -a * (-t.sr * t.cp + t.sp * t.cr * t.sq));
    put(hs[7], Q, R, a * t.cp * t.cr * t.cq);
    put(hs[7], P, U1, -km * (t.cr * t.cp + t.sp * t.sr * t.sq));
    put(hs[7], Q, U1, -km * (-t.cp * t.sr * t.cq));
    put(hs[7], R, U1, -km * (-t.sr * t.sp - t.cp * t.cr * t.sq));

    // d8 = g - cp cq a
    put(hs[8], P, P, t.cp * t.cq * a);
    put(hs[8], Q, Q, t.cp * t.cq * a);
    put(hs[8], P, Q, -t.sp * t.sq * a);
    put(hs[8], P, U1, t.sp * t.cq * km);
    put(hs[8], Q, U1, t.cp * t.sq * km);

    // gyroscopic bilinear terms
    put(hs[9], WQ, WR, (iy - iz) / ix);
    put(hs[10], WP, WR, (iz - ix) / iy);
    put(hs[11], WP, WQ, (ix - iy) / iz);

    return hs;
  };

  return model;
}

namespace {

Mat workspace_grid() {
  Mat grid(100, 2);
  int k = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      grid(k, 0) = -5.0 + 10.0 * i / 9.0;
      grid(k, 1) = -5.0 + 10.0 * j / 9.0;
      ++k;
    }
  return grid;
}

constexpr double kGpLengthscale = 2.0;

}  // namespace

const GpPosteriorMean& quadrotor_surface() {
  static const GpPosteriorMean surface = [] {
    const Mat grid = workspace_grid();
    Rng rng(0);
    const Vec values = GpPosteriorMean::sample_prior(grid, kGpLengthscale, 0.0, 1.0, rng);
    return GpPosteriorMean(grid, values, kGpLengthscale, 0.0, 1.0);
  }();
  return surface;
}

const GpPosteriorMean& quadrotor_obstacle_field() {
  static const GpPosteriorMean field = [] {
    const Mat grid = workspace_grid();
    Rng rng(1);
    const Vec values = GpPosteriorMean::sample_prior(grid, kGpLengthscale, -0.5, 1.0, rng);
    Mat inputs(102, 2);
    inputs.topRows(100) = grid;
    inputs.row(100) << -4.0, -4.0;
    inputs.row(101) << 4.0, 4.0;
    Vec targets(102);
    targets.head(100) = values;
    targets[100] = -2.0;  // keep start and goal regions free
    targets[101] = -2.0;
    return GpPosteriorMean(inputs, targets, kGpLengthscale, -0.5, 1.0);
  }();
  return field;
}

QuadrotorEnv::QuadrotorEnv(DynamicsModel dynamics, Vec initial_state,
                           ObstacleVariant variant, double dt)
    : dynamics_(std::move(dynamics)),
      state_(std::move(initial_state)),
      variant_(variant),
      dt_(dt) {
  center_ << 2.0, 0.0;
  velocity_ << -0.5 * M_SQRT1_2, 0.5 * M_SQRT1_2;
  frozen_center_ = center_;
}

void QuadrotorEnv::begin_plan() { frozen_center_ = center_; }

bool QuadrotorEnv::step(const Vec& control) {
  state_ = dynamics_.f(state_, control);
  if (!state_.allFinite()) {
    failure_ = "non-finite state";
    return false;
  }
  if (variant_ == ObstacleVariant::kDynamic) {
    center_ += velocity_ * dt_;
    const double dist = (state_.head(2) - center_).norm();
    if (dist < radius_) {
      failure_ = "collision with moving obstacle";
      return false;
    }
  } else if (variant_ == ObstacleVariant::kStatic) {
    if (quadrotor_obstacle_field().value(state_.head(2)) > 0.0) {
      failure_ = "collision with static obstacle";
      return false;
    }
  }
  return true;
}

double quadrotor_goal_distance(const Vec& state, const Vec& goal) {
  return (state.head(2) - goal.head(2)).norm();
}

QuadrotorBenchmark make_quadrotor(const QuadrotorParams& params, ObstacleVariant variant,
                                  std::uint64_t start_seed) {
  QuadrotorBenchmark bench;
  const int horizon = 12;
  const DynamicsModel dynamics = quadrotor_dynamics(params);
  const GpPosteriorMean& surface = quadrotor_surface();

  Rng rng(start_seed);
  Vec start = Vec::Zero(kStateDim);
  start[0] = -4.5 + 1.5 * rng.uniform();
  start[1] = -4.5 + 1.5 * rng.uniform();
  start[2] = surface.value(start.head(2));
  bench.start = start;

  Vec goal = Vec::Zero(kStateDim);
  goal[0] = 4.0;
  goal[1] = 4.0;
  goal[2] = surface.value(goal.head(2));
  bench.goal = goal;

  bench.env = std::make_shared<QuadrotorEnv>(dynamics, start, variant, params.dt);

  ProblemDef prob;
  prob.horizon = horizon;
  prob.state_dim = kStateDim;
  prob.control_dim = kControlDim;
  prob.x0 = start;
  prob.dynamics = dynamics;
  prob.state_names = {"x", "y", "z", "p", "q", "r", "vx", "vy", "vz", "wp", "wq", "wr"};
  prob.control_names = {"u1", "u2", "u3", "u4"};

  Vec q_diag(kStateDim);
  q_diag << 5, 5, 0.5, 2.5, 2.5, 0.025, 1.25, 1.25, 1.25, 2.5, 2.5, 2.5;
  const Vec p_diag = 2.0 * q_diag;
  Vec r_diag(kControlDim);
  r_diag << 0.5, 128, 128, 128;

  // Likelihood temperature. The stiffest cost direction (R = 128) has
  // curvature 256; with alpha_j = 0.05 an untempered posterior makes the
  // explicit Stein update unstable once the particle set clusters, so the
  // likelihood is flattened. The bounds projection backstops transients.
  prob.gamma_lik = 0.25;

  prob.cost = [q_diag, p_diag, r_diag, goal, horizon](const TrajectoryParticle& traj) {
    double acc = 0.0;
    for (int i = 0; i < horizon - 1; ++i) {
      const Vec dx = traj.states.row(i).transpose() - goal;
      acc += dx.dot(q_diag.cwiseProduct(dx));
      const Vec u = traj.controls.row(i);
      acc += u.dot(r_diag.cwiseProduct(u));
    }
    const Vec dxT = traj.states.row(horizon - 1).transpose() - goal;
    acc += dxT.dot(p_diag.cwiseProduct(dxT));
    return acc;
  };
  prob.cost_gradient = [q_diag, p_diag, r_diag, goal,
                        horizon](const TrajectoryParticle& traj) {
    Vec grad = Vec::Zero(horizon * (kStateDim + kControlDim));
    const int u_off = horizon * kStateDim;
    for (int i = 0; i < horizon - 1; ++i) {
      const Vec dx = traj.states.row(i).transpose() - goal;
      grad.segment(i * kStateDim, kStateDim) = 2.0 * q_diag.cwiseProduct(dx);
      const Vec u = traj.controls.row(i);
      grad.segment(u_off + i * kControlDim, kControlDim) = 2.0 * r_diag.cwiseProduct(u);
    }
    const Vec dxT = traj.states.row(horizon - 1).transpose() - goal;
    grad.segment((horizon - 1) * kStateDim, kStateDim) = 2.0 * p_diag.cwiseProduct(dxT);
    return grad;
  };

  // Surface equality z_t = f(x_t, y_t) at every timestep.
  prob.equality.rows = horizon;
  prob.equality.values = [&surface, horizon](const TrajectoryParticle& traj) {
    Vec v(horizon);
    for (int i = 0; i < horizon; ++i)
      v[i] = traj.states(i, 2) - surface.value(traj.states.row(i).head(2));
    return v;
  };
  prob.equality.jacobian = [&surface, horizon](const TrajectoryParticle& traj) {
    Mat jac = Mat::Zero(horizon, horizon * (kStateDim + kControlDim));
    for (int i = 0; i < horizon; ++i) {
      const Vec g2 = surface.gradient(traj.states.row(i).head(2));
      jac(i, i * kStateDim + 0) = -g2[0];
      jac(i, i * kStateDim + 1) = -g2[1];
      jac(i, i * kStateDim + 2) = 1.0;
    }
    return jac;
  };
  prob.equality.has_hessians = true;
  prob.equality.hessians = [&surface, horizon](const TrajectoryParticle& traj) {
    std::vector<ConstraintHessian> hs(horizon);
    for (int i = 0; i < horizon; ++i) {
      const Mat h2 = surface.hessian(traj.states.row(i).head(2));
      hs[i].available = true;
      hs[i].add(i * kStateDim + 0, i * kStateDim + 0, -h2(0, 0));
      hs[i].add(i * kStateDim + 0, i * kStateDim + 1, -h2(0, 1));
      hs[i].add(i * kStateDim + 1, i * kStateDim + 1, -h2(1, 1));
    }
    return hs;
  };

  if (variant == ObstacleVariant::kStatic) {
    const GpPosteriorMean& field = quadrotor_obstacle_field();
    prob.inequality.rows = horizon;
    prob.inequality.values = [&field, horizon](const TrajectoryParticle& traj) {
      Vec v(horizon);
      for (int i = 0; i < horizon; ++i) v[i] = field.value(traj.states.row(i).head(2));
      return v;
    };
    prob.inequality.jacobian = [&field, horizon](const TrajectoryParticle& traj) {
      Mat jac = Mat::Zero(horizon, horizon * (kStateDim + kControlDim));
      for (int i = 0; i < horizon; ++i) {
        const Vec g2 = field.gradient(traj.states.row(i).head(2));
        jac(i, i * kStateDim + 0) = g2[0];
        jac(i, i * kStateDim + 1) = g2[1];
      }
      return jac;
    };
    prob.inequality.has_hessians = true;
    prob.inequality.hessians = [&field, horizon](const TrajectoryParticle& traj) {
      std::vector<ConstraintHessian> hs(horizon);
      for (int i = 0; i < horizon; ++i) {
        const Mat h2 = field.hessian(traj.states.row(i).head(2));
        hs[i].available = true;
        hs[i].add(i * kStateDim + 0, i * kStateDim + 0, h2(0, 0));
        hs[i].add(i * kStateDim + 0, i * kStateDim + 1, h2(0, 1));
        hs[i].add(i * kStateDim + 1, i * kStateDim + 1, h2(1, 1));
      }
      return hs;
    };
  } else if (variant == ObstacleVariant::kDynamic) {
    // The planner sees the cylinder frozen at its pose from the last
    // begin_plan; the true obstacle keeps moving underneath it.
    auto env = bench.env;
    prob.inequality.rows = horizon;
    prob.inequality.values = [env, horizon](const TrajectoryParticle& traj) {
      const Vec c = env->frozen_obstacle_center();
      const double r2 = env->obstacle_radius() * env->obstacle_radius();
      Vec v(horizon);
      for (int i = 0; i < horizon; ++i)
        v[i] = r2 - (traj.states.row(i).head(2).transpose() - c).squaredNorm();
      return v;
    };
    prob.inequality.jacobian = [env, horizon](const TrajectoryParticle& traj) {
      const Vec c = env->frozen_obstacle_center();
      Mat jac = Mat::Zero(horizon, horizon * (kStateDim + kControlDim));
      for (int i = 0; i < horizon; ++i) {
        jac(i, i * kStateDim + 0) = -2.0 * (traj.states(i, 0) - c[0]);
        jac(i, i * kStateDim + 1) = -2.0 * (traj.states(i, 1) - c[1]);
      }
      return jac;
    };
    prob.inequality.has_hessians = true;
    prob.inequality.hessians = [horizon](const TrajectoryParticle&) {
      std::vector<ConstraintHessian> hs(horizon);
      for (int i = 0; i < horizon; ++i) {
        hs[i].available = true;
        hs[i].add(i * kStateDim + 0, i * kStateDim + 0, -2.0);
        hs[i].add(i * kStateDim + 1, i * kStateDim + 1, -2.0);
      }
      return hs;
    };
  }

  prob.bounds = Bounds::unbounded(kStateDim, kControlDim);
  prob.bounds.x_min[0] = -5.0;
  prob.bounds.x_min[1] = -5.0;
  prob.bounds.x_max[0] = 5.0;
  prob.bounds.x_max[1] = 5.0;
  prob.bounds.x_min[2] = -5.0;
  prob.bounds.x_max[2] = 5.0;
  // Attitude box keeps pitch away from the Euler-angle singularity; rate and
  // thrust boxes are actuator limits.
  for (int i = 3; i <= 4; ++i) {
    prob.bounds.x_min[i] = -1.2;
    prob.bounds.x_max[i] = 1.2;
  }
  for (int i = 6; i <= 8; ++i) {
    prob.bounds.x_min[i] = -10.0;
    prob.bounds.x_max[i] = 10.0;
  }
  for (int i = 9; i <= 11; ++i) {
    prob.bounds.x_min[i] = -8.0;
    prob.bounds.x_max[i] = 8.0;
  }
  prob.bounds.u_min[0] = -6.0;  // thrust is negative-valued in this convention
  prob.bounds.u_max[0] = 0.0;
  for (int c = 1; c < kControlDim; ++c) {
    prob.bounds.u_min[c] = -2.0;
    prob.bounds.u_max[c] = 2.0;
  }

  // Initialization: controls sampled around hover with the prior scale
  // sqrt(diag(2 R^-1)); regularization itself lives in the cost.
  prob.init_control_sigma.resize(kControlDim);
  for (int c = 0; c < kControlDim; ++c)
    prob.init_control_sigma[c] = std::sqrt(2.0 / r_diag[c]);
  prob.init_control_mean = Vec::Zero(kControlDim);
  prob.init_control_mean[0] = quadrotor_hover_thrust(params);

  prob.monitors.push_back(
      {"surface", [&surface](const Vec& state) {
         return std::abs(state[2] - surface.value(state.head(2)));
       }});
  if (variant == ObstacleVariant::kStatic) {
    prob.monitors.push_back({"obstacle", [](const Vec& state) {
                               return std::max(
                                   quadrotor_obstacle_field().value(state.head(2)), 0.0);
                             }});
  } else if (variant == ObstacleVariant::kDynamic) {
    auto env = bench.env;
    prob.monitors.push_back({"obstacle", [env](const Vec& state) {
                               const double dist =
                                   (state.head(2) - env->obstacle_center()).norm();
                               return std::max(env->obstacle_radius() - dist, 0.0);
                             }});
  }

  bench.problem = std::move(prob);
  return bench;
}

}  // namespace csvto
