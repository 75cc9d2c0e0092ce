#include "csvto/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csvto {

namespace {
constexpr double kBandwidthFloor = 1e-8;
}

double rbf(const Vec& a, const Vec& b, double bandwidth) {
  if (bandwidth <= 0.0) throw std::invalid_argument("rbf: bandwidth must be > 0");
  return std::exp(-(a - b).squaredNorm() / bandwidth);
}

Vec rbf_grad(const Vec& a, const Vec& b, double bandwidth) {
  const double k = rbf(a, b, bandwidth);
  return (2.0 / bandwidth) * k * (a - b);
}

double median_bandwidth(const std::vector<Vec>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 1) throw std::invalid_argument("median_bandwidth: empty particle set");
  if (n == 1) return 1.0;
  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dists.push_back((points[i] - points[j]).norm());
  std::sort(dists.begin(), dists.end());
  const size_t sz = dists.size();
  const double med = (sz % 2 == 1) ? dists[sz / 2]
                                   : 0.5 * (dists[sz / 2 - 1] + dists[sz / 2]);
  const double h = med * med / std::log(static_cast<double>(n));
  return std::max(h, kBandwidthFloor);
}

TrajectoryKernel::TrajectoryKernel(const std::vector<TrajectoryParticle>& set,
                                   int window) {
  if (set.empty()) throw std::invalid_argument("TrajectoryKernel: empty particle set");
  if (window < 1) throw std::invalid_argument("TrajectoryKernel: window must be >= 1");
  horizon_ = set.front().horizon();
  state_dim_ = set.front().state_dim();
  control_dim_ = set.front().control_dim();
  window_ = window;
  whole_trajectory_ = window >= horizon_;
  num_windows_ = whole_trajectory_ ? 1 : horizon_ - window;

  bandwidths_.resize(num_windows_);
  std::vector<Vec> at_t(set.size());
  for (int t = 0; t < num_windows_; ++t) {
    for (size_t i = 0; i < set.size(); ++i) at_t[i] = window_vector(set[i], t);
    bandwidths_[t] = median_bandwidth(at_t);
  }
}

Vec TrajectoryKernel::window_vector(const TrajectoryParticle& p, int t) const {
  if (whole_trajectory_) return p.flatten();
  const int len = window_ + 1;
  Vec v(len * (state_dim_ + control_dim_));
  for (int r = 0; r < len; ++r) {
    v.segment(r * state_dim_, state_dim_) = p.states.row(t + r);
    v.segment(len * state_dim_ + r * control_dim_, control_dim_) = p.controls.row(t + r);
  }
  return v;
}

double TrajectoryKernel::value(const TrajectoryParticle& a,
                               const TrajectoryParticle& b) const {
  double acc = 0.0;
  for (int t = 0; t < num_windows_; ++t)
    acc += rbf(window_vector(a, t), window_vector(b, t), bandwidths_[t]);
  return acc / num_windows_;
}

Vec TrajectoryKernel::grad_second(const TrajectoryParticle& a,
                                  const TrajectoryParticle& b) const {
  const int n_tau = b.flat_size();
  Vec grad = Vec::Zero(n_tau);
  if (whole_trajectory_) {
    return rbf_grad(a.flatten(), b.flatten(), bandwidths_[0]);
  }
  const int len = window_ + 1;
  const int t_states = horizon_ * state_dim_;
  for (int t = 0; t < num_windows_; ++t) {
    const Vec g = rbf_grad(window_vector(a, t), window_vector(b, t), bandwidths_[t]);
    for (int r = 0; r < len; ++r) {
      grad.segment((t + r) * state_dim_, state_dim_) += g.segment(r * state_dim_, state_dim_);
      grad.segment(t_states + (t + r) * control_dim_, control_dim_) +=
          g.segment(len * state_dim_ + r * control_dim_, control_dim_);
    }
  }
  return grad / num_windows_;
}

double trajectory_kernel(const TrajectoryParticle& a, const TrajectoryParticle& b,
                         int window) {
  if (window >= a.horizon())
    throw std::invalid_argument("trajectory_kernel: window must be < horizon");
  return TrajectoryKernel({a, b}, window).value(a, b);
}

Mat tangent_kernel(double k_scalar, const Mat& pi, const Mat& pj) {
  if (pi.rows() != pj.rows() || pi.cols() != pj.cols() || pi.rows() != pi.cols())
    throw std::invalid_argument("tangent_kernel: projector dimension mismatch");
  return k_scalar * pi * pj;
}

Vec tangent_kernel_gradient(double k_scalar, const Vec& grad_k, const Mat& pi,
                            const Mat& pj, const Vec& dpj_colsum) {
  if (pi.cols() != grad_k.size() || pi.cols() != dpj_colsum.size())
    throw std::invalid_argument("tangent_kernel_gradient: dimension mismatch");
  return pi * (pj * grad_k) + k_scalar * (pi * dpj_colsum);
}

Vec tangent_kernel_gradient(double k_scalar, const Vec& grad_k, const Mat& pi,
                            const Mat& pj, const std::vector<Mat>& dpj) {
  const int n = static_cast<int>(pi.cols());
  if (static_cast<int>(dpj.size()) != n)
    throw std::invalid_argument("tangent_kernel_gradient: need one d_k P per coordinate");
  Vec colsum = Vec::Zero(n);
  for (int k = 0; k < n; ++k) colsum += dpj[k].col(k);
  return tangent_kernel_gradient(k_scalar, grad_k, pi, pj, colsum);
}

}  // namespace csvto
