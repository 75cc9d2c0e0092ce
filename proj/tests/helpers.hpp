#pragma once

#include "csvto/problem.hpp"
#include "csvto/rng.hpp"

#include <vector>

namespace csvto::testing {

/// Componentwise error against `reference`, normalized by max(1, |reference|).
inline double rel_error(const Mat& value, const Mat& reference) {
  const double scale = std::max(1.0, reference.cwiseAbs().maxCoeff());
  return (value - reference).cwiseAbs().maxCoeff() / scale;
}

inline double rel_error(const Vec& value, const Vec& reference) {
  const double scale = std::max(1.0, reference.size() ? reference.cwiseAbs().maxCoeff() : 0.0);
  return (value - reference).cwiseAbs().maxCoeff() / scale;
}

/// Family of smooth constraints h_l(x) = x^T A_l x / 2 + b_l^T x + c_l with
/// exact Jacobian and Hessians, for derivative oracles.
struct QuadraticConstraints {
  std::vector<Mat> quad;  // symmetric
  std::vector<Vec> lin;
  Vec offset;

  int rows() const { return static_cast<int>(quad.size()); }

  Vec values(const Vec& x) const {
    Vec v(rows());
    for (int l = 0; l < rows(); ++l)
      v[l] = 0.5 * x.dot(quad[l] * x) + lin[l].dot(x) + offset[l];
    return v;
  }

  Mat jacobian(const Vec& x) const {
    Mat jac(rows(), x.size());
    for (int l = 0; l < rows(); ++l) jac.row(l) = (quad[l] * x + lin[l]).transpose();
    return jac;
  }

  std::vector<ConstraintHessian> hessians() const {
    std::vector<ConstraintHessian> hs(rows());
    const int n = static_cast<int>(quad.front().rows());
    for (int l = 0; l < rows(); ++l) {
      hs[l].available = true;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          if (quad[l](i, j) != 0.0) hs[l].add(i, j, quad[l](i, j));
    }
    return hs;
  }

  static QuadraticConstraints random(Rng& rng, int rows, int dim) {
    QuadraticConstraints qc;
    qc.offset = rng.normal_vec(rows);
    for (int l = 0; l < rows; ++l) {
      Mat a = rng.normal_mat(dim, dim);
      qc.quad.push_back(0.5 * (a + a.transpose()));
      qc.lin.push_back(rng.normal_vec(dim));
    }
    return qc;
  }
};

/// Horizon-1, control-free problem over R^dim: Gaussian log-posterior centered
/// at `mode` plus pluggable equality/inequality constraint sets.
inline ProblemDef make_static_problem(const Vec& mode,
                                      const QuadraticConstraints* equality = nullptr,
                                      const QuadraticConstraints* inequality = nullptr) {
  const int dim = static_cast<int>(mode.size());
  ProblemDef prob;
  prob.horizon = 1;
  prob.state_dim = dim;
  prob.control_dim = 0;
  prob.x0 = Vec::Zero(dim);
  prob.bounds = Bounds::unbounded(dim, 0);
  prob.cost = [mode](const TrajectoryParticle& p) {
    return 0.5 * (p.states.row(0).transpose() - mode).squaredNorm();
  };
  prob.cost_gradient = [mode](const TrajectoryParticle& p) {
    return (p.states.row(0).transpose() - mode).eval();
  };

  auto wire = [](TrajectoryConstraint& target, const QuadraticConstraints& qc) {
    target.rows = qc.rows();
    target.values = [qc](const TrajectoryParticle& p) {
      return qc.values(p.states.row(0));
    };
    target.jacobian = [qc](const TrajectoryParticle& p) {
      return qc.jacobian(p.states.row(0));
    };
    target.has_hessians = true;
    target.hessians = [qc](const TrajectoryParticle&) { return qc.hessians(); };
  };
  if (equality) wire(prob.equality, *equality);
  if (inequality) wire(prob.inequality, *inequality);
  return prob;
}

/// Single-integrator dynamics x' = x + u in dim dimensions.
inline DynamicsModel single_integrator(int dim) {
  DynamicsModel model;
  model.state_dim = dim;
  model.control_dim = dim;
  model.f = [](const Vec& x, const Vec& u) { return (x + u).eval(); };
  model.jac_state = [dim](const Vec&, const Vec&) { return Mat::Identity(dim, dim); };
  model.jac_control = [dim](const Vec&, const Vec&) { return Mat::Identity(dim, dim); };
  return model;
}

inline TrajectoryParticle particle_from_states(const Mat& states) {
  TrajectoryParticle p;
  p.states = states;
  p.controls.resize(states.rows(), 0);
  return p;
}

}  // namespace csvto::testing
