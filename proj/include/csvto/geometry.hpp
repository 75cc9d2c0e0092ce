#pragma once

#include "csvto/types.hpp"

#include <vector>

namespace csvto {

/// Singular values of J J^T below this are discarded when forming the
/// pseudo-inverse.
inline constexpr double kDefaultSvdCutoff = 1e-6;

/// Truncated pseudo-inverse of the Gram matrix J J^T.
struct GramPinv {
  Mat pinv;            // M x M
  int retained_rank = 0;
  Mat retained_basis;  // M x rank, orthonormal basis of the retained row space
};

/// Tangent-space projector P = I - J^T (J J^T)^+ J together with the pieces
/// it was built from. P annihilates the retained rows of J and is symmetric
/// and idempotent.
struct ProjectionData {
  Mat P;         // N x N
  GramPinv gram;
  Mat jacobian;  // M x N
  Mat pinv_jac;  // (J J^T)^+ J, cached for the feasibility step and repulsion

  int retained_rank() const { return gram.retained_rank; }
};

GramPinv gram_pinv(const Mat& jacobian, double cutoff = kDefaultSvdCutoff);

ProjectionData projection_matrix(const Mat& jacobian, double cutoff = kDefaultSvdCutoff);

/// Gauss-Newton step on 1/2 h^T h: delta = -J^T (J J^T)^+ h. Adding delta to
/// the decision vector reduces ||h|| to first order and solves linear systems
/// exactly in one unit step.
Vec feasibility_step(const Mat& jacobian, const Vec& values,
                     double cutoff = kDefaultSvdCutoff);
Vec feasibility_step(const ProjectionData& proj, const Vec& values);

/// Exact derivative of the projector: for each coordinate k,
///   d_k P = -A_k - A_k^T + Q^T Sdot_k Q,
/// with Q = (J J^T)^+ J, A_k = G_k^T Q, Sdot_k = G_k J^T + J G_k^T and
/// [G_k]_{l,j} = [H_l]_{k,j}. Rows whose Hessian is unavailable contribute as
/// zero matrices (locally linear treatment).
std::vector<Mat> projection_derivative(const Mat& jacobian,
                                       const std::vector<ConstraintHessian>& hessians,
                                       double cutoff = kDefaultSvdCutoff);

/// Column-sum contraction s[a] = sum_k [d_k P]_{a,k}, which is all the Stein
/// repulsion term needs from the projector derivative. Equals summing the
/// k-th column of each d_k P from projection_derivative, at a fraction of the
/// cost.
Vec projection_derivative_colsum(const ProjectionData& proj,
                                 const std::vector<ConstraintHessian>& hessians);

/// Slack initialization z_i = sqrt(2 |g_i|); satisfied inequalities start
/// exactly feasible in augmented form.
Vec init_slack(const Vec& g_values);

}  // namespace csvto
