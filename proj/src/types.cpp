#include "csvto/types.hpp"

#include <cmath>
#include <stdexcept>

namespace csvto {

Vec TrajectoryParticle::flatten() const {
  Vec out(flat_size());
  const int T = horizon();
  const int dx = state_dim();
  const int du = control_dim();
  for (int t = 0; t < T; ++t) out.segment(t * dx, dx) = states.row(t);
  const int off = T * dx;
  for (int t = 0; t < T; ++t) out.segment(off + t * du, du) = controls.row(t);
  return out;
}

TrajectoryParticle TrajectoryParticle::unflatten(const Vec& tau, int horizon,
                                                 int state_dim, int control_dim) {
  if (tau.size() != static_cast<Eigen::Index>(horizon) * (state_dim + control_dim))
    throw std::invalid_argument("unflatten: vector length does not match T*(d_x+d_u)");
  TrajectoryParticle p;
  p.states.resize(horizon, state_dim);
  p.controls.resize(horizon, control_dim);
  for (int t = 0; t < horizon; ++t)
    p.states.row(t) = tau.segment(t * state_dim, state_dim);
  const int off = horizon * state_dim;
  for (int t = 0; t < horizon; ++t)
    p.controls.row(t) = tau.segment(off + t * control_dim, control_dim);
  return p;
}

bool TrajectoryParticle::all_finite() const {
  return states.allFinite() && controls.allFinite();
}

void TrajectoryParticle::validate() const {
  if (states.rows() != controls.rows())
    throw std::invalid_argument("trajectory: states and controls disagree on horizon");
  if (states.rows() < 1) throw std::invalid_argument("trajectory: horizon must be >= 1");
  if (!all_finite()) throw std::invalid_argument("trajectory: non-finite entries");
}

Vec AugmentedParticle::flatten() const {
  Vec out(aug_size());
  out.head(particle.flat_size()) = particle.flatten();
  out.tail(slack.size()) = slack;
  return out;
}

AugmentedParticle AugmentedParticle::unflatten(const Vec& tau_hat, int horizon,
                                               int state_dim, int control_dim,
                                               int num_slack) {
  const int n_tau = horizon * (state_dim + control_dim);
  if (tau_hat.size() != n_tau + num_slack)
    throw std::invalid_argument("unflatten: augmented vector length mismatch");
  AugmentedParticle a;
  a.particle =
      TrajectoryParticle::unflatten(tau_hat.head(n_tau), horizon, state_dim, control_dim);
  a.slack = tau_hat.tail(num_slack);
  return a;
}

void ConstraintHessian::add(int row, int col, double value) {
  if (row > col) std::swap(row, col);
  entries.push_back({row, col, value});
}

Mat ConstraintHessian::dense(int n) const {
  Mat h = Mat::Zero(n, n);
  for (const auto& e : entries) {
    h(e.row, e.col) += e.value;
    if (e.row != e.col) h(e.col, e.row) += e.value;
  }
  return h;
}

double ConstraintHessian::trace() const {
  double t = 0;
  for (const auto& e : entries)
    if (e.row == e.col) t += e.value;
  return t;
}

void ConstraintHessian::multiply_add(const Vec& x, Vec& y) const {
  for (const auto& e : entries) {
    y[e.row] += e.value * x[e.col];
    if (e.row != e.col) y[e.col] += e.value * x[e.row];
  }
}

double ConstraintHessian::contract(const Mat& a) const {
  double s = 0;
  for (const auto& e : entries)
    s += (e.row == e.col) ? e.value * a(e.row, e.col) : 2.0 * e.value * a(e.row, e.col);
  return s;
}

}  // namespace csvto
