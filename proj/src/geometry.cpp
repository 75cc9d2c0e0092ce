#include "csvto/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace csvto {

namespace {

// Row-compressed view of a mostly-zero jacobian. Constraint jacobians here
// are block sparse (a handful of entries per row), and the Gram/projector
// assembly is much cheaper walking the nonzeros than as dense products.
struct SparseRows {
  struct Entry {
    int col;
    double value;
  };
  std::vector<std::vector<Entry>> rows;
  int cols = 0;

  explicit SparseRows(const Mat& jacobian) {
    rows.resize(jacobian.rows());
    cols = static_cast<int>(jacobian.cols());
    for (int r = 0; r < jacobian.rows(); ++r)
      for (int c = 0; c < cols; ++c)
        if (jacobian(r, c) != 0.0) rows[r].push_back({c, jacobian(r, c)});
  }

  Mat gram() const {
    const int m = static_cast<int>(rows.size());
    Mat gram(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) {
        double acc = 0.0;
        // merge-join over sorted column indices
        size_t a = 0, b = 0;
        while (a < rows[i].size() && b < rows[j].size()) {
          const int ca = rows[i][a].col, cb = rows[j][b].col;
          if (ca == cb) {
            acc += rows[i][a].value * rows[j][b].value;
            ++a;
            ++b;
          } else if (ca < cb) {
            ++a;
          } else {
            ++b;
          }
        }
        gram(i, j) = acc;
        gram(j, i) = acc;
      }
    return gram;
  }
};

}  // namespace

GramPinv gram_pinv(const Mat& jacobian, double cutoff) {
  const int m = static_cast<int>(jacobian.rows());
  GramPinv out;
  if (m == 0) {
    out.pinv.resize(0, 0);
    out.retained_basis.resize(0, 0);
    return out;
  }
  if (!jacobian.allFinite())
    throw std::runtime_error("gram_pinv: non-finite jacobian");

  const Mat gram = SparseRows(jacobian).gram();
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gram_pinv: eigendecomposition failed");
  const Vec& evals = es.eigenvalues();
  const Mat& evecs = es.eigenvectors();

  int rank = 0;
  for (int i = 0; i < m; ++i)
    if (evals[i] >= cutoff) ++rank;

  out.retained_rank = rank;
  out.retained_basis.resize(m, rank);
  Mat scaled(m, rank);
  int c = 0;
  for (int i = 0; i < m; ++i) {
    if (evals[i] < cutoff) continue;
    out.retained_basis.col(c) = evecs.col(i);
    scaled.col(c) = evecs.col(i) / evals[i];
    ++c;
  }
  out.pinv.noalias() = scaled * out.retained_basis.transpose();
  out.pinv = 0.5 * (out.pinv + out.pinv.transpose()).eval();
  return out;
}

ProjectionData projection_matrix(const Mat& jacobian, double cutoff) {
  ProjectionData proj;
  proj.jacobian = jacobian;
  proj.gram = gram_pinv(jacobian, cutoff);
  const int m = static_cast<int>(jacobian.rows());
  const int n = static_cast<int>(jacobian.cols());
  if (m == 0) {
    proj.P = Mat::Identity(n, n);
    proj.pinv_jac.resize(0, n);
    return proj;
  }

  const SparseRows sparse(jacobian);
  // Q = (J J^T)^+ J, walked over the nonzeros of J.
  proj.pinv_jac = Mat::Zero(m, n);
  for (int l = 0; l < m; ++l)
    for (const auto& e : sparse.rows[l])
      proj.pinv_jac.col(e.col) += e.value * proj.gram.pinv.col(l);

  // P = I - J^T Q, built column-wise from Q^T for contiguous access.
  const Mat q_t = proj.pinv_jac.transpose();
  Mat jtq = Mat::Zero(n, n);
  for (int l = 0; l < m; ++l)
    for (const auto& e : sparse.rows[l]) jtq.col(e.col) += e.value * q_t.col(l);
  proj.P = Mat::Identity(n, n) - 0.5 * (jtq + jtq.transpose());
  return proj;
}

Vec feasibility_step(const Mat& jacobian, const Vec& values, double cutoff) {
  if (jacobian.rows() != values.size())
    throw std::invalid_argument("feasibility_step: jacobian/value dimension mismatch");
  if (jacobian.rows() == 0) return Vec::Zero(jacobian.cols());
  const GramPinv gram = gram_pinv(jacobian, cutoff);
  return -jacobian.transpose() * (gram.pinv * values);
}

Vec feasibility_step(const ProjectionData& proj, const Vec& values) {
  if (proj.jacobian.rows() != values.size())
    throw std::invalid_argument("feasibility_step: jacobian/value dimension mismatch");
  if (proj.jacobian.rows() == 0) return Vec::Zero(proj.jacobian.cols());
  return -proj.pinv_jac.transpose() * values;
}

std::vector<Mat> projection_derivative(const Mat& jacobian,
                                       const std::vector<ConstraintHessian>& hessians,
                                       double cutoff) {
  const int m = static_cast<int>(jacobian.rows());
  const int n = static_cast<int>(jacobian.cols());
  if (static_cast<int>(hessians.size()) != m)
    throw std::invalid_argument("projection_derivative: one Hessian slot per row required");

  std::vector<Mat> out(n, Mat::Zero(n, n));
  if (m == 0) return out;

  const GramPinv gram = gram_pinv(jacobian, cutoff);
  const Mat q = gram.pinv * jacobian;  // M x N

  std::vector<Mat> hdense(m);
  for (int l = 0; l < m; ++l)
    hdense[l] = hessians[l].available ? hessians[l].dense(n) : Mat::Zero(n, n);

  Mat gk(m, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < m; ++l) gk.row(l) = hdense[l].row(k);
    const Mat ak = gk.transpose() * q;
    const Mat sdot = gk * jacobian.transpose() + jacobian * gk.transpose();
    out[k].noalias() = q.transpose() * sdot * q;
    out[k] -= ak + ak.transpose();
  }
  return out;
}

Vec projection_derivative_colsum(const ProjectionData& proj,
                                 const std::vector<ConstraintHessian>& hessians) {
  const int m = static_cast<int>(proj.jacobian.rows());
  const int n = static_cast<int>(proj.jacobian.cols());
  if (static_cast<int>(hessians.size()) != m)
    throw std::invalid_argument(
        "projection_derivative_colsum: one Hessian slot per row required");
  if (m == 0) return Vec::Zero(n);

  const Mat& q = proj.pinv_jac;                     // M x N
  const Mat normal = Mat::Identity(n, n) - proj.P;  // J^T (J J^T)^+ J

  Vec u1 = Vec::Zero(n);  // sum_l H_l q_l
  Vec tr(m);              // tr(H_l)
  Vec ctr(m);             // tr(H_l * normal)
  Vec qrow(n);
  for (int l = 0; l < m; ++l) {
    if (!hessians[l].available) {
      tr[l] = 0.0;
      ctr[l] = 0.0;
      continue;
    }
    qrow = q.row(l);
    hessians[l].multiply_add(qrow, u1);
    tr[l] = hessians[l].trace();
    ctr[l] = hessians[l].contract(normal);
  }
  Vec s = -u1 + normal * u1;
  s.noalias() -= q.transpose() * tr;
  s.noalias() += q.transpose() * ctr;
  return s;
}

Vec init_slack(const Vec& g_values) {
  Vec z(g_values.size());
  for (int i = 0; i < g_values.size(); ++i) z[i] = std::sqrt(2.0 * std::abs(g_values[i]));
  return z;
}

}  // namespace csvto
