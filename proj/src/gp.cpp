#include "csvto/gp.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace csvto {

namespace {

Mat kernel_matrix(const Mat& inputs, double lengthscale, double signal_var) {
  const int n = static_cast<int>(inputs.rows());
  Mat k(n, n);
  const double denom = 2.0 * lengthscale * lengthscale;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v =
          signal_var * std::exp(-(inputs.row(i) - inputs.row(j)).squaredNorm() / denom);
      k(i, j) = v;
      k(j, i) = v;
    }
  return k;
}

}  // namespace

GpPosteriorMean::GpPosteriorMean(Mat observations, const Vec& targets, double lengthscale,
                                 double mean_const, double signal_var, double jitter)
    : observations_(std::move(observations)),
      lengthscale_sq_(lengthscale * lengthscale),
      mean_(mean_const),
      signal_var_(signal_var) {
  if (lengthscale <= 0.0) throw std::invalid_argument("gp: lengthscale must be > 0");
  const int n = static_cast<int>(observations_.rows());
  if (targets.size() != n) throw std::invalid_argument("gp: target count mismatch");
  if (n == 0) {
    alpha_.resize(0);
    return;
  }
  const Mat k = kernel_matrix(observations_, lengthscale, signal_var);
  // Escalating jitter: start far below the interpolation tolerance and only
  // regularize as much as the factorization needs.
  Eigen::LLT<Mat> llt;
  bool ok = false;
  for (const double level : {std::min(1e-12, jitter), jitter}) {
    Mat reg = k;
    reg.diagonal().array() += level;
    llt.compute(reg);
    if (llt.info() == Eigen::Success) {
      ok = true;
      break;
    }
  }
  if (!ok) throw std::runtime_error("gp: kernel matrix singular after jitter");
  alpha_ = llt.solve(targets - Vec::Constant(n, mean_const));
}

double GpPosteriorMean::value(const Vec& query) const {
  double acc = mean_;
  for (int i = 0; i < alpha_.size(); ++i) {
    const double sq = (query - observations_.row(i).transpose()).squaredNorm();
    acc += alpha_[i] * signal_var_ * std::exp(-sq / (2.0 * lengthscale_sq_));
  }
  return acc;
}

Vec GpPosteriorMean::gradient(const Vec& query) const {
  Vec grad = Vec::Zero(query.size());
  for (int i = 0; i < alpha_.size(); ++i) {
    const Vec diff = query - observations_.row(i).transpose();
    const double k = signal_var_ * std::exp(-diff.squaredNorm() / (2.0 * lengthscale_sq_));
    grad -= alpha_[i] * k / lengthscale_sq_ * diff;
  }
  return grad;
}

Mat GpPosteriorMean::hessian(const Vec& query) const {
  const int d = static_cast<int>(query.size());
  Mat hess = Mat::Zero(d, d);
  for (int i = 0; i < alpha_.size(); ++i) {
    const Vec diff = query - observations_.row(i).transpose();
    const double k = signal_var_ * std::exp(-diff.squaredNorm() / (2.0 * lengthscale_sq_));
    hess += alpha_[i] * k *
            (diff * diff.transpose() / (lengthscale_sq_ * lengthscale_sq_) -
             Mat::Identity(d, d) / lengthscale_sq_);
  }
  return hess;
}

Vec GpPosteriorMean::sample_prior(const Mat& inputs, double lengthscale, double mean_const,
                                  double signal_var, Rng& rng, double jitter) {
  const int n = static_cast<int>(inputs.rows());
  Mat k = kernel_matrix(inputs, lengthscale, signal_var);
  k.diagonal().array() += jitter;
  Eigen::LLT<Mat> llt(k);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gp: prior kernel matrix singular after jitter");
  return Vec::Constant(n, mean_const) + llt.matrixL() * rng.normal_vec(n);
}

}  // namespace csvto
