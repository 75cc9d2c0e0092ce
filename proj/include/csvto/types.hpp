#pragma once

#include <Eigen/Core>

#include <vector>

namespace csvto {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A candidate trajectory under direct transcription. States x_1..x_T are the
/// rows of `states`, controls u_0..u_{T-1} the rows of `controls`; both are
/// decision variables. The flattened decision vector is
/// [x_1; ...; x_T; u_0; ...; u_{T-1}].
struct TrajectoryParticle {
  Mat states;    // T x d_x
  Mat controls;  // T x d_u

  int horizon() const { return static_cast<int>(states.rows()); }
  int state_dim() const { return static_cast<int>(states.cols()); }
  int control_dim() const { return static_cast<int>(controls.cols()); }
  int flat_size() const { return horizon() * (state_dim() + control_dim()); }

  Vec flatten() const;
  static TrajectoryParticle unflatten(const Vec& tau, int horizon, int state_dim,
                                      int control_dim);

  bool all_finite() const;
  /// Throws std::invalid_argument on inconsistent horizons or non-finite entries.
  void validate() const;
};

/// Trajectory plus slack vector z, one entry per scalar inequality constraint.
/// The slack turns g(tau) <= 0 into the equality g(tau) + z^2/2 = 0.
struct AugmentedParticle {
  TrajectoryParticle particle;
  Vec slack;

  int aug_size() const {
    return particle.flat_size() + static_cast<int>(slack.size());
  }
  Vec flatten() const;  // [tau; z]
  static AugmentedParticle unflatten(const Vec& tau_hat, int horizon, int state_dim,
                                     int control_dim, int num_slack);
};

/// Sparse symmetric Hessian of a single scalar constraint row. Entries are
/// stored upper-triangular (row <= col); off-diagonal entries stand for the
/// mirrored pair. `available == false` means the second derivative was not
/// provided and the row is treated as locally linear (zero matrix).
struct ConstraintHessian {
  struct Entry {
    int row;
    int col;
    double value;
  };

  bool available = false;
  std::vector<Entry> entries;

  void add(int row, int col, double value);
  Mat dense(int n) const;
  double trace() const;
  /// y += H x
  void multiply_add(const Vec& x, Vec& y) const;
  /// sum_{a,b} H_{a,b} A_{a,b} for symmetric A
  double contract(const Mat& a) const;
};

/// Stacked constraint values with first and optional second derivatives.
/// Row order is [h(tau); dynamics defects; g(tau) + z^2/2], columns are the
/// augmented coordinates [tau; z].
struct ConstraintBundle {
  Vec values;                               // M
  Mat jacobian;                             // M x N
  std::vector<ConstraintHessian> hessians;  // one per row

  int rows() const { return static_cast<int>(values.size()); }
  int cols() const { return static_cast<int>(jacobian.cols()); }
};

}  // namespace csvto
