#pragma once

#include "csvto/types.hpp"

#include <vector>

namespace csvto {

/// RBF kernel exp(-||a-b||^2 / bandwidth). Note the convention: the bandwidth
/// divides the squared distance directly (no factor of 2).
double rbf(const Vec& a, const Vec& b, double bandwidth);

/// Gradient of rbf(a, b, bandwidth) with respect to b.
Vec rbf_grad(const Vec& a, const Vec& b, double bandwidth);

/// Median heuristic: median of pairwise distances over distinct pairs
/// (i < j), squared, divided by log N. Floored at 1e-8; a single particle
/// yields bandwidth 1 (log 1 = 0 guard). Self-distances are excluded so a
/// cluster of duplicates cannot bias the bandwidth toward zero.
double median_bandwidth(const std::vector<Vec>& points);

/// Sliding-window trajectory kernel: the mean of per-window RBF kernels,
/// window t = [x_{t:t+W}, u_{t-1:t-1+W}] for t = 1..T-W, each with its own
/// median-heuristic bandwidth computed from the fitted particle set.
class TrajectoryKernel {
 public:
  /// Fits per-window bandwidths on the given particle set. When window >= T
  /// the kernel degenerates to a single RBF over the whole flattened
  /// trajectory, which keeps one-step problems usable.
  TrajectoryKernel(const std::vector<TrajectoryParticle>& set, int window);

  double value(const TrajectoryParticle& a, const TrajectoryParticle& b) const;
  /// Gradient of value(a, b) with respect to the flattened b (length
  /// T*(d_x+d_u)); bandwidths are treated as constants.
  Vec grad_second(const TrajectoryParticle& a, const TrajectoryParticle& b) const;

  int num_windows() const { return num_windows_; }
  const std::vector<double>& bandwidths() const { return bandwidths_; }
  Vec window_vector(const TrajectoryParticle& p, int t) const;

 private:
  int horizon_ = 0;
  int state_dim_ = 0;
  int control_dim_ = 0;
  int window_ = 0;
  int num_windows_ = 0;
  bool whole_trajectory_ = false;
  std::vector<double> bandwidths_;
};

/// Strict sliding-window kernel between two trajectories, bandwidths from the
/// pair itself. Throws std::invalid_argument when window >= T.
double trajectory_kernel(const TrajectoryParticle& a, const TrajectoryParticle& b,
                         int window);

/// Matrix-valued tangent-space kernel K(tau_i, tau_j) P_i P_j.
Mat tangent_kernel(double k_scalar, const Mat& pi, const Mat& pj);

/// Gradient of the matrix kernel with respect to the second argument:
/// [grad]_l = sum_m d[K P_i P_j]_{l,m} / d [tau_j]_m
///          = [P_i P_j grad_k]_l + k [P_i s_j]_l,
/// where s_j is the projector-derivative column sum (projection_derivative_colsum).
Vec tangent_kernel_gradient(double k_scalar, const Vec& grad_k, const Mat& pi,
                            const Mat& pj, const Vec& dpj_colsum);

/// Full-tensor overload; dpj[k] is the derivative of P_j w.r.t. coordinate k.
Vec tangent_kernel_gradient(double k_scalar, const Vec& grad_k, const Mat& pi,
                            const Mat& pj, const std::vector<Mat>& dpj);

}  // namespace csvto
